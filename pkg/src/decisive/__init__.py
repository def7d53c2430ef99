"""Analytics for sUAS test-method campaigns.

Parses recorded trial data (trajectories, outcomes, feature sheets, surveys)
and computes navigation, collision, field-readiness, mapping, autonomy,
trust, and situation-awareness metrics, with deterministic report tables
and plots.
"""

__version__ = "0.1.0"
