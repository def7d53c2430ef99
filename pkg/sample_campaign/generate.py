#!/usr/bin/env python3
"""Regenerate the bundled sample campaign (synthetic, seeded, deterministic).

Run from the repository root:

    python3 sample_campaign/generate.py

The committed files are the output of this script; regenerate only when the
formats change, then refresh the golden outputs under tests/golden/.
"""

import csv
import json
import random
from pathlib import Path

HERE = Path(__file__).parent
RATE_HZ = 20.0
DT = 1.0 / RATE_HZ


def write_csv(name, header, rows):
    with open(HERE / name, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def fmt(value):
    return f"{value:.6f}"


def wall_follow_flight(name, offset_y, wobble, seed):
    """Straight 3 m flight along x at y = 1 + offset, 20 Hz, with velocity."""
    rng = random.Random(seed)
    rows = []
    t = 0.0
    x = 0.0
    speed = 0.5
    while x < 3.0:
        y = 1.0 + offset_y + wobble * rng.uniform(-1.0, 1.0)
        rows.append([fmt(t), fmt(x), fmt(y), fmt(1.0), fmt(speed), fmt(0.0), fmt(0.0)])
        t += DT
        x += speed * DT
    rows.append([fmt(t), fmt(3.0), fmt(1.0 + offset_y), fmt(1.0),
                 fmt(speed), fmt(0.0), fmt(0.0)])
    write_csv(name, ["t", "x", "y", "z", "vx", "vy", "vz"], rows)


def oa_flight(name, collides, min_distance, seed):
    """Approach the wall segment (y = 0 plane) from y = 1.5 at 0.5 m/s.

    Colliding flights cross y = 0 with a velocity step at the contact time;
    avoiding flights brake to a stop at `min_distance`.
    """
    rng = random.Random(seed)
    rows = []
    t = 0.0
    y = 1.5
    vy = -0.5
    t_collision = None
    while t < 6.0:
        rows.append([fmt(t), fmt(1.5), fmt(y), fmt(1.0), fmt(0.0), fmt(vy), fmt(0.0)])
        if collides and t_collision is None and y + vy * DT <= 0.0:
            # contact happens within the next step: annotate the last
            # pre-impact sample and bounce back from here on
            t_collision = round(t, 6)
            vy = 0.45
        t += DT
        y += vy * DT
        if collides:
            if t_collision is not None and t > t_collision + 0.6:
                break
        else:
            if y <= min_distance + 0.25 and vy < -0.05:
                vy = min(-0.05, vy + 1.0 * DT)  # brake
            if y <= min_distance:
                vy = 0.0
                y = min_distance
            if vy == 0.0 and t > 4.0:
                break
    write_csv(name, ["t", "x", "y", "z", "vx", "vy", "vz"], rows)
    return t_collision


def fiducial_observations():
    # ground truth corners of a 4 m x 3 m loop plus one interior fiducial;
    # the map is scaled by 40 px/m and fiducial D drifts 12 cm outward
    truth = {"A": (0.0, 0.0), "B": (4.0, 0.0), "C": (4.0, 3.0), "D": (0.0, 3.0), "E": (2.0, 1.5)}
    scale = 40.0
    drift = {"D": (-0.12, 0.12)}
    rows = []
    for fid, (x, y) in sorted(truth.items()):
        dx, dy = drift.get(fid, (0.0, 0.0))
        for half in (1, 2):
            if fid == "E" and half == 2:
                rows.append([fid, half, "", "", "missing"])
                continue
            state = "partial" if (fid == "C" and half == 2) else "complete"
            rows.append([fid, half, fmt((x + dx) * scale), fmt((y + dy) * scale), state])
    write_csv("fiducials.csv", ["fiducial_id", "half", "x", "y", "mapped"], rows)
    return truth


def surveys():
    rng = random.Random(424242)
    hctm_items = [f"hctm{i:02d}" for i in range(1, 13)]
    ctpa_items = [f"ctpa{i}" for i in range(1, 10)]
    rows = []
    for condition, shift in (("caged", 1), ("exposed", 0)):
        for p in range(1, 11):
            participant = f"{condition[0]}{p:02d}"
            manip = "false" if (condition == "exposed" and p == 10) else "true"
            for item in hctm_items:
                base = rng.randint(3, 5) + shift
                rows.append([participant, "HCTM", item, min(base, 7), manip, condition])
            for item in ctpa_items:
                base = rng.randint(3, 5) + shift
                rows.append([participant, "CTPA", item, min(base, 7), manip, condition])
    write_csv(
        "surveys.csv",
        ["participant_id", "instrument", "item_id", "score", "manip_pass", "condition"],
        rows,
    )


def sagat():
    rng = random.Random(77)
    elements = ["landolt_red", "landolt_green", "altitude", "heading", "battery"]
    skill = {"p1": 0.9, "p2": 0.8, "p3": 0.7, "p4": 0.55, "p5": 0.85, "p6": 0.65}
    rows = []
    q = 0
    for participant, ability in sorted(skill.items()):
        for se in elements:
            for level in (1, 1, 2):
                q += 1
                correct = "true" if rng.random() < ability else "false"
                rows.append([participant, f"q{q:03d}", se, level, correct])
    write_csv(
        "sagat.csv",
        ["participant_id", "question_id", "se_id", "sa_level", "correct"],
        rows,
    )
    params = {
        "landolt_red": {"saliency": 1.8, "effort": 1.0, "expectancy": 1.2, "value": 1.5},
        "landolt_green": {"saliency": 1.6, "effort": 1.0, "expectancy": 1.2, "value": 1.5},
        "altitude": {"saliency": 0.8, "effort": 1.4, "expectancy": 1.0, "value": 1.0},
        "heading": {"saliency": 0.7, "effort": 1.4, "expectancy": 1.0, "value": 1.0},
        "battery": {"saliency": 1.0, "effort": 1.2, "expectancy": 0.9, "value": 1.6},
    }
    missions = {
        "aviate": ["altitude", "heading", "battery"],
        "navigate": ["altitude", "heading"],
        "hazard": ["landolt_red", "landolt_green"],
    }
    (HERE / "sa_weights.json").write_text(
        json.dumps({"params": params, "missions": missions}, indent=2) + "\n",
        encoding="utf-8",
    )


def cfis_scores():
    # difficulty conditions keep all four environment variables in one band;
    # the shipped three-rule environment stage is silent on mixed bands
    easy = [0, 0, 1.2, 0.6]
    medium = [5, 5, 2.4, 1.2]
    hard = [10, 10, 3.6, 1.8]
    header = ["suas_id", "test_id", "crashes", "rollovers", "completion",
              "roll", "pitch", "lateral_obstruction", "vertical_obstruction"]
    rows = [
        ["alpha", "takeoff-easy", 0, 0, 1.0, *easy],
        ["alpha", "takeoff-hard", 2, 1, 0.8, *hard],
        ["alpha", "land-medium", 1, 0, 0.9, *medium],
        ["bravo", "takeoff-easy", 0, 0, 1.0, *easy],
        ["bravo", "takeoff-hard", 0, 0, 1.0, *hard],
        ["bravo", "land-medium", 0, 0, 1.0, *medium],
    ]
    write_csv("cfis_scores.csv", header, rows)


def features():
    doc = {
        "features": [
            {"name": "flight_time", "direction": "higher", "degree": 2},
            {"name": "charge_time", "direction": "lower", "degree": 3},
            {"name": "stream_resolution", "direction": "higher", "degree": 2,
             "ordinal_map": {"FHD": 3, "FHD30p": 2}},
            {"name": "fov", "direction": "higher", "degree": 2},
            {"name": "max_range", "direction": "higher", "degree": 2},
            {"name": "thermal_resolution", "direction": "higher", "degree": 3,
             "ordinal_map": {"160x120": 1}},
            {"name": "weight", "direction": "lower", "degree": 3},
            {"name": "max_speed", "direction": "higher", "degree": 2},
            {"name": "sensors", "direction": "higher", "degree": 1},
            {"name": "smart_behaviors", "direction": "higher", "degree": 1},
        ],
        "systems": [
            {
                "id": "alpha",
                "values": {
                    "flight_time": 15, "charge_time": 50, "stream_resolution": "FHD",
                    "fov": 100, "max_range": 2000, "thermal_resolution": "N/A",
                    "weight": 370, "max_speed": 3, "sensors": 3, "smart_behaviors": 2,
                },
                "capabilities": {"perception": True, "modeling": True,
                                 "planning": True, "execution": False},
            },
            {
                "id": "bravo",
                "values": {
                    "flight_time": 10, "charge_time": 90, "stream_resolution": "FHD30p",
                    "fov": 114, "max_range": 500, "thermal_resolution": "160x120",
                    "weight": 1450, "max_speed": 6.5, "sensors": 10, "smart_behaviors": 7,
                },
                "capabilities": {"perception": True, "modeling": False,
                                 "planning": False, "execution": False},
            },
        ],
    }
    (HERE / "features.json").write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def criteria():
    doc = {
        "hd_video_min": {"op": "min", "value": 120},
        "weight_total_lb": {"op": "max", "value": 30},
        "battery_type": {"op": "contains", "value": "Li"},
        "emergency_stop": {"op": "equals", "value": "yes"},
    }
    (HERE / "criteria.json").write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def main():
    # telemetry: three wall-follow flights for alpha, two for bravo
    wall_flights = {
        "alpha": [("wf_alpha_1.csv", 0.08, 0.02, 101),
                  ("wf_alpha_2.csv", 0.12, 0.02, 102),
                  ("wf_alpha_3.csv", 0.10, 0.02, 103)],
        "bravo": [("wf_bravo_1.csv", 0.04, 0.01, 201),
                  ("wf_bravo_2.csv", 0.05, 0.01, 202)],
    }
    for flights in wall_flights.values():
        for name, offset, wobble, seed in flights:
            wall_follow_flight(name, offset, wobble, seed)

    # obstacle-avoidance: five alpha flights, two of them collide
    oa_specs = [
        ("oa_alpha_1.csv", True, 0.0, 301),
        ("oa_alpha_2.csv", True, 0.0, 302),
        ("oa_alpha_3.csv", False, 0.32, 303),
        ("oa_alpha_4.csv", False, 0.24, 304),
        ("oa_alpha_5.csv", False, 0.26, 305),
    ]
    collision_times = {}
    for name, collides, min_d, seed in oa_specs:
        t_c = oa_flight(name, collides, min_d, seed)
        if t_c is not None:
            collision_times[name] = t_c

    truth = fiducial_observations()
    surveys()
    sagat()
    cfis_scores()
    features()
    criteria()

    manifest = {
        "schema_version": 1,
        "suas": [
            {"id": "alpha", "name": "platform alpha"},
            {"id": "bravo", "name": "platform bravo"},
        ],
        "environments": [
            {"id": "lab", "lighting": "lighted", "dims": [8.0, 6.0, 5.0],
             "indoor": True, "lux": 450},
        ],
        "tests": [
            {
                "test_id": "wall-follow-1m", "kind": "nav", "environment": "lab",
                "path": {"vertices": [[0.0, 1.0, 1.0], [3.0, 1.0, 1.0]], "closed": False},
                "waypoint": [3.0, 1.0, 0.0],
            },
            {
                "test_id": "aperture-doorway", "kind": "nav", "environment": "lab",
                "length_m": 7.8,
            },
            {
                "test_id": "oa-wall", "kind": "collision", "environment": "lab",
                "obstacle": {"kind": "plane_segment", "p0": [0.0, 0.0], "p1": [3.0, 0.0],
                              "height": 2.0, "material": "wall"},
            },
            {
                "test_id": "endurance-indoor", "kind": "field", "environment": "lab",
                "nlos_positions": [
                    {"label": "X", "distance": 5.0, "obstructions": [],
                     "connect": "good", "fly": "possible"},
                    {"label": "1", "distance": 14.0, "obstructions": [[1, "drywall"]],
                     "connect": "good", "fly": "possible"},
                    {"label": "2", "distance": 20.0, "obstructions": [[2, "drywall"]],
                     "connect": "good", "fly": "possible"},
                    {"label": "3", "distance": 25.0, "obstructions": [[3, "drywall"]],
                     "connect": "bad", "fly": "not_possible"},
                    {"label": "4", "distance": 27.0, "obstructions": [[4, "drywall"]],
                     "connect": "none", "fly": "not_possible"},
                ],
                "criteria": "criteria.json",
                "responses": {
                    "alpha": {"hd_video_min": 150, "weight_total_lb": 47.5,
                              "battery_type": "Li-po", "emergency_stop": "yes"},
                    "bravo": {"hd_video_min": 90, "weight_total_lb": 27.5,
                              "battery_type": "Li-ion", "emergency_stop": "yes"},
                },
            },
            {
                "test_id": "map-loop", "kind": "mapping", "environment": "lab",
                "fiducials": [
                    {"id": "A", "xy": [0.0, 0.0], "min_traversal": 11, "min_turns": 2},
                    {"id": "B", "xy": [4.0, 0.0], "min_traversal": 8, "min_turns": 2},
                    {"id": "C", "xy": [4.0, 3.0], "min_traversal": 35, "min_turns": 7},
                    {"id": "D", "xy": [0.0, 3.0], "min_traversal": 5, "min_turns": 2},
                    {"id": "E", "xy": [2.0, 1.5], "min_traversal": 12, "min_turns": 3},
                ],
                "observations": "fiducials.csv",
                "shape_classes": {"A": "complete", "B": "complete", "C": "incomplete",
                                   "D": "shifted", "E": "complete"},
                "dimensions": {"reported": [3.9, 3.05], "truth": [4.0, 3.0]},
                "fov": {"visible": 11, "total": 16},
                "acuity_levels": [8, 8, 8, 20, 8, 8, 8, 8, 3],
            },
        ],
        "trials": [],
    }

    trial_id = 0

    def add_trial(**kwargs):
        nonlocal trial_id
        trial_id += 1
        manifest["trials"].append({"trial_id": f"t{trial_id:03d}", **kwargs})

    for suas_id, flights in sorted(wall_flights.items()):
        for name, *_rest in flights:
            add_trial(test_id="wall-follow-1m", suas_id=suas_id, outcome="success",
                      telemetry=name)

    oa_categories = ["OA-B2", "OA-B1", "OA-A1", "OA-A1", "OA-A1"]
    cr_categories = ["CR-B3", "CR-A2", "CR-A1", "CR-A1", "CR-A1"]
    for (name, collides, _min_d, _seed), oa_cat, cr_cat in zip(oa_specs, oa_categories, cr_categories):
        entry = dict(test_id="oa-wall", suas_id="alpha",
                     outcome="failure" if collides else "success",
                     collisions=1 if collides else 0,
                     oa_category=oa_cat, cr_category=cr_cat, telemetry=name)
        if name in collision_times:
            entry["t_collision_s"] = collision_times[name]
        add_trial(**entry)

    add_trial(test_id="endurance-indoor", suas_id="alpha", outcome="success",
              laps=20, duration_min=8.0)
    add_trial(test_id="endurance-indoor", suas_id="bravo", outcome="success",
              laps=23, duration_min=32.0)

    aperture_tiers = ["A1", "A1", "A2", "A1", "B1"]
    for i, tier in enumerate(aperture_tiers):
        add_trial(test_id="aperture-doorway", suas_id="alpha",
                  outcome="failure" if tier == "B1" else "success",
                  aperture_tier=tier, duration_min=1.0)

    (HERE / "campaign.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    print(f"wrote sample campaign under {HERE}")


if __name__ == "__main__":
    main()
