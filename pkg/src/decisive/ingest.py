"""Parsers for every on-disk input: telemetry, manifests, surveys, sheets, configs.

Every parser is total: a file either yields a value plus a ParseReport or a
structured error naming the offending location. Formats are deliberately
plain: CSV with required headers for recorded data, JSON with an explicit
schema_version for manifests and configuration. UTF-8, '.' decimal separator,
',' delimiter.
"""

from __future__ import annotations

import csv
import functools
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .cfis import Fis, FisConfig, LinguisticVariable, Rule, TriangularMf
from .core import (
    APERTURE_TIERS,
    CR_CATEGORIES,
    OA_CATEGORIES,
    Campaign,
    EnvironmentProfile,
    ObstacleGeometry,
    Trajectory,
    TrialRecord,
)
from .errors import (
    CyclicCascade,
    DanglingReference,
    MalformedTuple,
    MissingColumn,
    MissingDirection,
    NonMonotonicTime,
    NonNumericField,
    ParseError,
    SchemaVersionUnsupported,
    ScoreOutOfRange,
    UnknownCategory,
    UnknownInstrument,
    UnknownTerm,
)
from .field import Criterion, NlosPosition
from .human_factors import SagatResponse, SurveyDataset, SurveyRow
from .mapping import FiducialGroundTruth, FiducialObservation
from .nav import ReferencePath
from .ncap import ABSENT, Feature, FeatureTable

SUPPORTED_SCHEMA_VERSIONS = (1,)

CTPA_ITEM_COUNT = 9
HCTM_ITEM_COUNT = 12


@dataclass
class ParseReport:
    """What was loaded and every warning raised along the way."""

    source: str
    warnings: list[tuple[object, str]] = field(default_factory=list)
    counts: dict[str, int] = field(default_factory=dict)

    def warn(self, location, message: str) -> None:
        self.warnings.append((location, message))


def _total(fn):
    """Make a parser total: malformed shapes become structured errors."""

    @functools.wraps(fn)
    def wrapper(path, *args, **kwargs):
        from .errors import DecisiveError

        try:
            return fn(path, *args, **kwargs)
        except DecisiveError:
            raise
        except (TypeError, AttributeError, KeyError, ValueError, IndexError, csv.Error) as exc:
            raise ParseError(f"malformed input ({exc})", str(path))

    return wrapper


def _read_rows(path) -> tuple[list[str], list[tuple[int, list[str]]]]:
    """(header, [(1-based file line, row), ...]) for a CSV file."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise MissingColumn("file is empty", str(path))
        rows = [
            (lineno, row)
            for lineno, row in enumerate(reader, start=2)
            if any(cell.strip() for cell in row)
        ]
    return [h.strip() for h in header], rows


def _number(text: str, line: int) -> float:
    try:
        return float(text)
    except ValueError:
        raise NonNumericField(f"cannot parse {text!r} as a number", line)


def _boolean(text: str, line: int) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "y"):
        return True
    if lowered in ("0", "false", "no", "n"):
        return False
    raise NonNumericField(f"cannot parse {text!r} as a boolean", line)


# --- telemetry -----------------------------------------------------------------

REQUIRED_TELEMETRY = ("t", "x", "y", "z")
VEL_COLUMNS = ("vx", "vy", "vz")
ACC_COLUMNS = ("ax", "ay", "az")


@_total
def parse_telemetry(path) -> tuple[Trajectory, ParseReport]:
    """Load a telemetry trace: t,x,y,z with optional vx,vy,vz and ax,ay,az."""
    report = ParseReport(str(path))
    header, rows = _read_rows(path)
    for col in REQUIRED_TELEMETRY:
        if col not in header:
            raise MissingColumn(f"missing column {col!r}", str(path))
    for group in (VEL_COLUMNS, ACC_COLUMNS):
        present = [c for c in group if c in header]
        if present and len(present) != 3:
            raise MissingColumn(
                f"columns {group} must appear together, found only {present}", str(path)
            )
    known = set(REQUIRED_TELEMETRY) | set(VEL_COLUMNS) | set(ACC_COLUMNS)
    for col in header:
        if col not in known:
            report.warn(1, f"ignoring unknown column {col!r}")

    idx = {c: header.index(c) for c in header if c in known}
    has_vel = all(c in idx for c in VEL_COLUMNS)
    has_acc = all(c in idx for c in ACC_COLUMNS)

    t, pos, vel, acc = [], [], [], []
    prev_t = None
    for line, row in rows:
        ti = _number(row[idx["t"]], line)
        if prev_t is not None and ti <= prev_t:
            raise NonMonotonicTime(f"time {ti} does not increase past {prev_t}", line)
        prev_t = ti
        t.append(ti)
        pos.append([_number(row[idx[c]], line) for c in ("x", "y", "z")])
        if has_vel:
            vel.append([_number(row[idx[c]], line) for c in VEL_COLUMNS])
        if has_acc:
            acc.append([_number(row[idx[c]], line) for c in ACC_COLUMNS])

    if len(t) < 2:
        raise ParseError("telemetry needs at least two samples", str(path))
    traj = Trajectory(
        t=np.array(t),
        pos=np.array(pos),
        vel=np.array(vel) if has_vel else None,
        acc=np.array(acc) if has_acc else None,
    )
    report.counts["samples"] = len(t)
    return traj, report


def write_telemetry(traj: Trajectory, path) -> None:
    """Write a trajectory back out in the telemetry CSV format."""
    header = list(REQUIRED_TELEMETRY)
    if traj.vel is not None:
        header += list(VEL_COLUMNS)
    if traj.acc is not None:
        header += list(ACC_COLUMNS)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for i in range(len(traj)):
            row = [repr(float(traj.t[i]))] + [repr(float(v)) for v in traj.pos[i]]
            if traj.vel is not None:
                row += [repr(float(v)) for v in traj.vel[i]]
            if traj.acc is not None:
                row += [repr(float(v)) for v in traj.acc[i]]
            writer.writerow(row)


# --- campaign manifest ----------------------------------------------------------

@_total
def parse_campaign(path) -> tuple[Campaign, ParseReport]:
    """Load and cross-validate a campaign manifest."""
    path = Path(path)
    report = ParseReport(str(path))
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}", str(path))

    version = doc.get("schema_version")
    if version not in SUPPORTED_SCHEMA_VERSIONS:
        raise SchemaVersionUnsupported(f"schema_version {version!r}", str(path))

    suas = {}
    for entry in doc.get("suas", []):
        if "id" not in entry:
            raise ParseError("sUAS entry missing 'id'", str(path))
        suas[entry["id"]] = entry

    environments = {}
    for entry in doc.get("environments", []):
        env_id = entry.get("id")
        if env_id is None:
            raise ParseError("environment entry missing 'id'", str(path))
        environments[env_id] = EnvironmentProfile(
            lighting=entry.get("lighting", "lighted"),
            dims=tuple(entry["dims"]) if "dims" in entry else None,
            surfaces=tuple(entry.get("surfaces", ())),
            obstructions=tuple((int(c), m) for c, m in entry.get("obstructions", ())),
            indoor=bool(entry.get("indoor", True)),
            lux=entry.get("lux"),
        )

    tests = {}
    for entry in doc.get("tests", []):
        test_id = entry.get("test_id")
        if test_id is None:
            raise ParseError("test entry missing 'test_id'", str(path))
        env_ref = entry.get("environment")
        if env_ref is not None and env_ref not in environments:
            raise DanglingReference(f"test {test_id} references environment {env_ref!r}")
        tests[test_id] = entry

    trials = []
    for entry in doc.get("trials", []):
        trial_id = entry.get("trial_id", "?")
        if entry.get("test_id") not in tests:
            raise DanglingReference(
                f"trial {trial_id} references unknown test {entry.get('test_id')!r}"
            )
        if entry.get("suas_id") not in suas:
            raise DanglingReference(
                f"trial {trial_id} references unknown sUAS {entry.get('suas_id')!r}"
            )
        for key, vocab in (
            ("oa_category", OA_CATEGORIES),
            ("cr_category", CR_CATEGORIES),
            ("aperture_tier", APERTURE_TIERS),
        ):
            value = entry.get(key)
            if value is not None and value not in vocab:
                raise UnknownCategory(f"trial {trial_id}: {key} {value!r}")
        telemetry = entry.get("telemetry")
        if telemetry is not None and not (path.parent / telemetry).exists():
            raise DanglingReference(f"trial {trial_id}: telemetry file {telemetry!r} not found")
        trials.append(
            TrialRecord(
                trial_id=trial_id,
                test_id=entry["test_id"],
                suas_id=entry["suas_id"],
                outcome=entry.get("outcome", "success"),
                collisions=int(entry.get("collisions", 0)),
                rollovers=int(entry.get("rollovers", 0)),
                oa_category=entry.get("oa_category"),
                cr_category=entry.get("cr_category"),
                aperture_tier=entry.get("aperture_tier"),
                t_collision=entry.get("t_collision_s"),
                duration=float(entry.get("duration_min", 0.0)),
                laps=entry.get("laps"),
                telemetry=telemetry,
                notes=entry.get("notes", ""),
            )
        )

    if not trials:
        report.warn(str(path), "no trials")
    report.counts.update(
        suas=len(suas), tests=len(tests), environments=len(environments), trials=len(trials)
    )
    return Campaign(suas=suas, tests=tests, environments=environments, trials=tuple(trials)), report


def reference_path_from_test(test: dict) -> ReferencePath:
    spec = test.get("path")
    if spec is None:
        raise ParseError(f"test {test.get('test_id')} has no path")
    return ReferencePath(tuple(tuple(v) for v in spec["vertices"]), bool(spec.get("closed", False)))


def obstacle_from_test(test: dict) -> ObstacleGeometry:
    spec = test.get("obstacle")
    if spec is None:
        raise ParseError(f"test {test.get('test_id')} has no obstacle")
    return ObstacleGeometry(
        kind=spec.get("kind", "plane_segment"),
        p0=tuple(spec["p0"]),
        p1=tuple(spec["p1"]),
        height=float(spec["height"]),
        material=spec.get("material", "wall"),
    )


# --- surveys --------------------------------------------------------------------

SURVEY_COLUMNS = ("participant_id", "instrument", "item_id", "score", "manip_pass", "condition")


@_total
def parse_survey(path) -> tuple[SurveyDataset, ParseReport]:
    """Load Likert survey rows; duplicate (participant, instrument, item) keeps the last."""
    report = ParseReport(str(path))
    header, rows = _read_rows(path)
    for col in SURVEY_COLUMNS:
        if col not in header:
            raise MissingColumn(f"missing column {col!r}", str(path))
    idx = {c: header.index(c) for c in SURVEY_COLUMNS}

    by_key: dict[tuple[str, str, str], SurveyRow] = {}
    for line, row in rows:
        instrument = row[idx["instrument"]].strip()
        if instrument not in ("CTPA", "HCTM"):
            raise UnknownInstrument(f"instrument {instrument!r}", line)
        score = _number(row[idx["score"]], line)
        if not (score.is_integer() and 1 <= score <= 7):
            raise ScoreOutOfRange(f"score {row[idx['score']]!r} outside 1..7", line)
        entry = SurveyRow(
            participant_id=row[idx["participant_id"]].strip(),
            instrument=instrument,
            item_id=row[idx["item_id"]].strip(),
            score=int(score),
            manip_pass=_boolean(row[idx["manip_pass"]], line),
            condition=row[idx["condition"]].strip(),
        )
        key = (entry.participant_id, entry.instrument, entry.item_id)
        if key in by_key:
            report.warn(line, f"duplicate response for {key}; keeping the later row")
        by_key[key] = entry

    rows_out = tuple(by_key.values())
    expected = {"CTPA": CTPA_ITEM_COUNT, "HCTM": HCTM_ITEM_COUNT}
    seen: dict[tuple[str, str], set] = {}
    for r in rows_out:
        seen.setdefault((r.participant_id, r.instrument), set()).add(r.item_id)
    for (participant, instrument), items in sorted(seen.items()):
        if len(items) != expected[instrument]:
            report.warn(
                str(path),
                f"{participant}: {instrument} has {len(items)} items, expected {expected[instrument]}",
            )
    report.counts["responses"] = len(rows_out)
    return SurveyDataset(rows_out), report


SAGAT_COLUMNS = ("participant_id", "question_id", "se_id", "sa_level", "correct")


@_total
def parse_sagat(path) -> tuple[list[SagatResponse], ParseReport]:
    report = ParseReport(str(path))
    header, rows = _read_rows(path)
    for col in SAGAT_COLUMNS:
        if col not in header:
            raise MissingColumn(f"missing column {col!r}", str(path))
    idx = {c: header.index(c) for c in SAGAT_COLUMNS}
    out = []
    for line, row in rows:
        level = _number(row[idx["sa_level"]], line)
        if level not in (1.0, 2.0):
            raise ScoreOutOfRange(f"sa_level {row[idx['sa_level']]!r} must be 1 or 2", line)
        out.append(
            SagatResponse(
                participant=row[idx["participant_id"]].strip(),
                question_id=row[idx["question_id"]].strip(),
                se_id=row[idx["se_id"]].strip(),
                sa_level=int(level),
                correct=_boolean(row[idx["correct"]], line),
            )
        )
    report.counts["responses"] = len(out)
    return out, report


# --- feature sheets ---------------------------------------------------------------

@dataclass(frozen=True)
class FeatureSheet:
    """A feature table plus the per-system extras a sheet may carry."""

    table: FeatureTable
    capabilities: dict[str, dict[str, bool]]
    degrees: dict[str, int]


@_total
def parse_feature_sheet(path) -> tuple[FeatureSheet, ParseReport]:
    report = ParseReport(str(path))
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}", str(path))

    direction_map = {"higher": "higher_better", "lower": "lower_better"}
    features = []
    degrees = {}
    for entry in doc.get("features", []):
        name = entry.get("name")
        if name is None:
            raise ParseError("feature missing 'name'", str(path))
        if "direction" not in entry:
            raise MissingDirection(f"feature {name!r} has no direction", str(path))
        direction = direction_map.get(entry["direction"])
        if direction is None:
            raise MissingDirection(
                f"feature {name!r}: direction must be 'higher' or 'lower'", str(path)
            )
        ordinal = entry.get("ordinal_map")
        features.append(
            Feature(
                name,
                direction,
                {k: float(v) for k, v in ordinal.items()} if ordinal else None,
            )
        )
        if "degree" in entry:
            degrees[name] = int(entry["degree"])

    values = {}
    capabilities = {}
    for system in doc.get("systems", []):
        sid = system.get("id")
        if sid is None:
            raise ParseError("system missing 'id'", str(path))
        values[sid] = {
            k: (ABSENT if v == ABSENT or v is None else v)
            for k, v in system.get("values", {}).items()
        }
        if "capabilities" in system:
            capabilities[sid] = {k: bool(v) for k, v in system["capabilities"].items()}

    table = FeatureTable(tuple(features), values)
    report.counts.update(features=len(features), systems=len(values))
    return FeatureSheet(table, capabilities, degrees), report


# --- FIS configuration ----------------------------------------------------------

@_total
def parse_fis_config(path) -> tuple[FisConfig, ParseReport]:
    report = ParseReport(str(path))
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}", str(path))

    systems = {}
    for fis_name, spec in doc.get("fis", {}).items():
        inputs = {}
        for var_name, var_spec in spec.get("inputs", {}).items():
            lo, hi = (float(v) for v in var_spec["range"])
            terms = {}
            for term, tup in var_spec.get("terms", {}).items():
                if len(tup) != 3:
                    raise MalformedTuple(
                        f"{fis_name}.{var_name}.{term}: need 3 points, got {tup}"
                    )
                a, b, c = (float(v) for v in tup)
                if not a <= b <= c:
                    raise MalformedTuple(f"{fis_name}.{var_name}.{term}: {tup} not ordered")
                if not (lo <= a and c <= hi):
                    raise MalformedTuple(
                        f"{fis_name}.{var_name}.{term}: {tup} outside range [{lo}, {hi}]"
                    )
                terms[term] = TriangularMf(a, b, c, lo, hi)
            aliases = dict(var_spec.get("aliases", {}))
            for alias, target in aliases.items():
                if target not in terms:
                    raise UnknownTerm(f"{fis_name}.{var_name}: alias {alias!r} -> {target!r}")
            var = LinguisticVariable(var_name, lo, hi, terms, aliases)
            if not var.covered():
                report.warn(fis_name, f"variable {var_name!r} has membership gaps")
            inputs[var_name] = var

        outputs = {k: float(v) for k, v in spec.get("outputs", {}).items()}
        for level, value in outputs.items():
            if not 0.0 <= value <= 1.0:
                raise ParseError(f"{fis_name}: output {level}={value} outside [0, 1]", str(path))

        rules = []
        for i, rule_spec in enumerate(spec.get("rules", [])):
            antecedents = []
            for var_name, term in rule_spec.get("if", {}).items():
                if var_name not in inputs:
                    raise UnknownTerm(f"{fis_name} rule {i}: unknown variable {var_name!r}")
                negated = term.startswith("not ")
                bare = term[4:] if negated else term
                if not inputs[var_name].has_term(bare):
                    raise UnknownTerm(f"{fis_name} rule {i}: unknown term {term!r}")
                antecedents.append((var_name, bare, negated))
            consequent = rule_spec.get("then")
            if consequent not in outputs:
                raise UnknownTerm(f"{fis_name} rule {i}: unknown output {consequent!r}")
            rules.append(Rule(tuple(antecedents), consequent))
        if not rules:
            raise ParseError(f"{fis_name}: at least one rule required", str(path))
        systems[fis_name] = Fis(fis_name, inputs, outputs, tuple(rules))

    cascade = {}
    for combined, axes in doc.get("cascade", {}).items():
        if combined not in systems:
            raise UnknownTerm(f"cascade target {combined!r} not defined")
        for axis in axes:
            if axis not in systems:
                raise UnknownTerm(f"cascade input {axis!r} not defined")
        cascade[combined] = tuple(axes)
    _check_acyclic(cascade)

    config = FisConfig(
        name=doc.get("name", Path(str(path)).stem),
        fis=systems,
        cascade=cascade,
        ideal_inputs={
            axis: {k: float(v) for k, v in vals.items()}
            for axis, vals in doc.get("ideal_inputs", {}).items()
        },
    )
    report.counts["fis"] = len(systems)
    return config, report


def _check_acyclic(cascade: dict[str, tuple[str, ...]]) -> None:
    def walk(node, seen):
        if node in seen:
            raise CyclicCascade(f"cycle through {node!r}")
        for child in cascade.get(node, ()):
            walk(child, seen | {node})

    for root in cascade:
        walk(root, set())


# --- checklist criteria -----------------------------------------------------------

@_total
def parse_criteria(path) -> tuple[list[Criterion], ParseReport]:
    """Checklist criteria: {"field": {"op": "min", "value": 120}, ...}."""
    report = ParseReport(str(path))
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}", str(path))
    out = []
    for field_name, spec in doc.items():
        try:
            out.append(Criterion(field_name, spec["op"], spec["value"]))
        except (KeyError, ValueError) as exc:
            raise ParseError(f"criterion {field_name!r}: {exc}", str(path))
    report.counts["criteria"] = len(out)
    return out, report


# --- fiducial observations -----------------------------------------------------

FIDUCIAL_COLUMNS = ("fiducial_id", "half", "x", "y", "mapped")


@_total
def parse_fiducial_observations(path) -> tuple[list[FiducialObservation], ParseReport]:
    report = ParseReport(str(path))
    header, rows = _read_rows(path)
    for col in FIDUCIAL_COLUMNS:
        if col not in header:
            raise MissingColumn(f"missing column {col!r}", str(path))
    idx = {c: header.index(c) for c in FIDUCIAL_COLUMNS}
    out = []
    for line, row in rows:
        mapped = row[idx["mapped"]].strip()
        if mapped == "missing":
            xy = None
        else:
            xy = (_number(row[idx["x"]], line), _number(row[idx["y"]], line))
        half = _number(row[idx["half"]], line)
        if half not in (1.0, 2.0):
            raise ScoreOutOfRange(f"half must be 1 or 2, got {row[idx['half']]!r}", line)
        try:
            out.append(
                FiducialObservation(row[idx["fiducial_id"]].strip(), int(half), xy, mapped)
            )
        except ValueError as exc:
            raise ParseError(str(exc), line)
    report.counts["observations"] = len(out)
    return out, report


def ground_truth_from_test(test: dict) -> list[FiducialGroundTruth]:
    out = []
    for entry in test.get("fiducials", []):
        out.append(
            FiducialGroundTruth(
                fiducial_id=entry["id"],
                gt_xy=tuple(entry["xy"]),
                min_traversal=float(entry["min_traversal"]),
                min_turns=int(entry["min_turns"]),
            )
        )
    return out


def nlos_positions_from_test(test: dict) -> list[NlosPosition]:
    out = []
    for entry in test.get("nlos_positions", []):
        out.append(
            NlosPosition(
                label=entry["label"],
                distance=float(entry["distance"]),
                obstructions=tuple((int(c), m) for c, m in entry.get("obstructions", ())),
                connect=entry.get("connect", "none"),
                fly=entry.get("fly", "not_possible"),
                latency_ms=entry.get("latency_ms"),
            )
        )
    return out
