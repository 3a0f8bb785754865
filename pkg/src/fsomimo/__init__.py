"""Performance analysis and beam-width optimization of FSO-MIMO links.

Negative-exponential (saturated) turbulence on each of the ``M*N`` paths,
equal-gain combining, and Gaussian-beam pointing error. Submodules:

``specfun``      special functions, semi-infinite adaptive quadrature
``geometry``     beam/aperture/jitter -> (v, A0, w_zeq, xi)
``channel``      pointing, turbulence and combined irradiance statistics
``performance``  SNR, link budget, outage, M-PSK/DPSK BER closed forms
``optimizer``    BER-minimizing xi and beam width
``oracle``       quadrature and Monte Carlo cross-checks, discrepancy report
``cli``          ``fsomimo`` command line
"""

from .channel import ChannelParams, PdfVariant
from .exceptions import (
    ConvergenceError,
    DomainError,
    ModelRangeWarning,
    PaperDiscrepancyWarning,
    QuadratureError,
)
from .geometry import BeamGeometry, PointingParams, beam_width_for_xi, pointing_params
from .optimizer import optimize_beam_width, optimize_xi
from .performance import (
    BPSK,
    DPSK,
    PSK8,
    QPSK,
    DpskForm,
    LinkBudget,
    Modulation,
    SnrSpec,
    ber_closed,
    ber_dpsk_closed,
    ber_mpsk_closed,
    outage_probability,
)

__version__ = "0.1.0"
