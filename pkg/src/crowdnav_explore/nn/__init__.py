from .layers import (
    Dense,
    Dropout,
    ForwardContractError,
    Mode,
    NoisyDense,
    Relu,
    ShapeError,
)
from .network import Network
from .optim import Adam
from .serialize import (
    ArchitectureMismatchError,
    SerializationError,
    load_network,
    load_networks,
    restore_networks,
    save_network,
    save_networks,
)

__all__ = [
    "Adam",
    "ArchitectureMismatchError",
    "Dense",
    "Dropout",
    "ForwardContractError",
    "Mode",
    "Network",
    "NoisyDense",
    "Relu",
    "SerializationError",
    "ShapeError",
    "load_network",
    "load_networks",
    "restore_networks",
    "save_network",
    "save_networks",
]
