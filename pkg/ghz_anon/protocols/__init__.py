from .network import AgentId, NetworkConfig
from .transcript import Transcript, TranscriptRecord
from .anonymous import (
    AnonymousNetwork,
    parity_broadcast_distribution,
    run_authentication,
    run_collision_detection,
    run_logical_or,
    run_notification,
    run_parity,
    supported_parities,
    total_variation,
)
from .entanglement import (
    AegOutcome,
    EntanglementGenerator,
    TeleportOutcome,
    anonymous_teleport,
    aeg_branch_states,
    aeg_broadcast_distribution,
    aeg_verification_branches,
    mode_parity_distribution,
    run_aeg,
    run_aeg_session,
    payload_state,
    teleport_fidelity,
)

__all__ = [
    'AgentId',
    'NetworkConfig',
    'Transcript',
    'TranscriptRecord',
    'AnonymousNetwork',
    'EntanglementGenerator',
    'AegOutcome',
    'run_parity',
    'run_logical_or',
    'run_notification',
    'run_authentication',
    'run_collision_detection',
    'run_aeg',
    'run_aeg_session',
    'TeleportOutcome',
    'anonymous_teleport',
    'payload_state',
    'teleport_fidelity',
    'parity_broadcast_distribution',
    'supported_parities',
    'total_variation',
    'aeg_branch_states',
    'aeg_verification_branches',
    'aeg_broadcast_distribution',
    'mode_parity_distribution',
]
