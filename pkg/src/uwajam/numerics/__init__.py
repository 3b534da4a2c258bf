"""Numerical substrate: quadrature, CF inversion, Marcum Q, random streams."""

from .gilpelaez import gil_pelaez_tail
from .marcum import marcum_q1
from .quadrature import (DEFAULT_SPEC, IntegralResult, QuadratureSpec,
                         integrate)
from .streams import RandomStream, sample_poisson, split_stream

__all__ = [
    "DEFAULT_SPEC",
    "IntegralResult",
    "QuadratureSpec",
    "RandomStream",
    "gil_pelaez_tail",
    "integrate",
    "marcum_q1",
    "sample_poisson",
    "split_stream",
]
