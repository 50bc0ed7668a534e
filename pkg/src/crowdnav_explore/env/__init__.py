from .episode import (
    AgentPose,
    EpisodeRecord,
    PolicyContractError,
    TrajectoryStep,
    run_episode,
)
from .features import encode_state, feature_length
from .kinematics import ActionSet, build_action_space, speed_levels, step_kinematics
from .reward import compute_reward, detect_outcome, separation_distances
from .scenarios import generate_scenario
from .types import (
    Action,
    EnvConfig,
    EpisodeOutcome,
    HumanState,
    JointState,
    OutcomeKind,
    RobotState,
    wrap_angle,
    wrap_to_pi,
)

__all__ = [
    "Action",
    "ActionSet",
    "AgentPose",
    "EnvConfig",
    "EpisodeOutcome",
    "EpisodeRecord",
    "HumanState",
    "JointState",
    "OutcomeKind",
    "PolicyContractError",
    "RobotState",
    "TrajectoryStep",
    "build_action_space",
    "compute_reward",
    "detect_outcome",
    "encode_state",
    "feature_length",
    "generate_scenario",
    "run_episode",
    "separation_distances",
    "speed_levels",
    "step_kinematics",
    "wrap_angle",
    "wrap_to_pi",
]
