"""Event-driven simulation of facilitated exclusion and related processes."""
import warnings

# Old system TBB builds make numba fall back to another threading layer and
# say so on every import; the fallback is harmless.
warnings.filterwarnings("ignore", message="The TBB threading layer")

from .simulate import (
    ClockField,
    ObepParams,
    circle_hitting_time,
    coupling_time,
    first_tag,
    obep_heights,
    order_violations,
    path_hitting_time,
    run_field,
    segment_hitting_time,
    simulate_circle,
    simulate_coupled,
    simulate_obep,
    simulate_path,
    simulate_segment,
    simulate_zrp,
    zrp_hitting_time,
)
from .trajectory import HitResult, Trajectory, first_hitting

__all__ = [
    "ClockField", "ObepParams", "Trajectory", "HitResult", "first_hitting",
    "simulate_path", "simulate_coupled", "simulate_segment", "simulate_circle",
    "simulate_obep", "simulate_zrp", "coupling_time", "path_hitting_time",
    "circle_hitting_time", "segment_hitting_time", "zrp_hitting_time",
    "order_violations", "first_tag", "obep_heights", "run_field",
]
