"""Sleep-phase consolidation for feedforward networks.

Train a bias-free ReLU network, convert it to a spiking network, run an
unsupervised STDP sleep phase on Poisson-encoded mean inputs, and convert
back. See the project README for the experiment protocols.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__ as _core_doc  # noqa: F401

__version__ = "0.1.0"
