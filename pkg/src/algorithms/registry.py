"""Map AlgorithmKind to its implementation."""

from src.algorithms.asgd import ShuffledAsgd, UniformAsgd, VanillaAsgd
from src.algorithms.base import TrainingAlgorithm
from src.algorithms.dude import DudeAsgd, SiagMifa
from src.algorithms.fedbuff import FedBuff
from src.algorithms.sync import SyncSgd
from src.config.constants import AlgorithmKind

ALGORITHMS = {
    AlgorithmKind.DUDE_ASGD: DudeAsgd,
    AlgorithmKind.VANILLA_ASGD: VanillaAsgd,
    AlgorithmKind.UNIFORM_ASGD: UniformAsgd,
    AlgorithmKind.SHUFFLED_ASGD: ShuffledAsgd,
    AlgorithmKind.SYNC_SGD: SyncSgd,
    AlgorithmKind.SIAG_MIFA: SiagMifa,
    AlgorithmKind.FEDBUFF: FedBuff,
}


def make_algorithm(obj, params, streams, eta, speeds=None, **kwargs) -> TrainingAlgorithm:
    """Instantiate the algorithm named by params.kind."""
    return ALGORITHMS[params.kind](obj, params, streams, eta, speeds=speeds, **kwargs)
