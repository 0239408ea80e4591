"""Random phase shift baseline: a single random reflection vector per block."""

import logging
from typing import Optional

from ..estimation import PilotVector
from ..system import SystemConfig
from .proposed import ProposedScheme


class RandomPhaseScheme(ProposedScheme):
    """
    One slot with a uniformly random reflection vector, then water-filling
    on its estimate. Shares the random streams of the training protocol, so
    it reproduces the Q = 1 protocol outcome exactly.
    """

    name = 'random-phase'

    def __init__(self, config: SystemConfig, noise_enabled: bool = True,
                 pilot: Optional[PilotVector] = None, logger: Optional[logging.Logger] = None):
        super().__init__(config, num_slots=1, noise_enabled=noise_enabled, pilot=pilot, logger=logger)
