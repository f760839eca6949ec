"""Physical constants (CODATA 2018, SI units).

Hard-coded to full precision so that derived quantities are reproducible
bit-for-bit across environments.  Keep only primitive constants here.
"""

C_LIGHT: float = 299792458.0            # speed of light in vacuum, m/s (exact)
PLANCK_H: float = 6.62607015e-34        # Planck constant, J s (exact)
HBAR: float = 1.054571817e-34           # reduced Planck constant, J s
BOLTZMANN_K: float = 1.380649e-23       # Boltzmann constant, J/K (exact)
EPSILON_0: float = 8.8541878128e-12     # vacuum permittivity, F/m

__all__ = ["C_LIGHT", "PLANCK_H", "HBAR", "BOLTZMANN_K", "EPSILON_0"]
