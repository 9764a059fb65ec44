"""Physical constants and unit conversions (SI, CODATA via scipy)."""

from scipy import constants as _const

HBAR = _const.hbar            # J s
PLANCK = _const.h             # J s
C_LIGHT = _const.c            # m/s
K_B = _const.k                # J/K
E_CHARGE = _const.e           # C
EPS0 = _const.epsilon_0       # F/m
M_NUCLEON = _const.m_n        # kg, neutron mass used as the per-nucleon mass scale
AMU_KG = _const.atomic_mass   # kg

EV_TO_J = _const.e
GEV_CM3_TO_J_M3 = 1e9 * _const.e / 1e-6   # GeV/cm^3 -> J/m^3
SECONDS_PER_YEAR = 365.25 * 86400.0
