"""Physical constants and normalization conventions.

All quantities SI. ``F_REF`` is the frequency normalization used inside the
material dispersion power law so that the (a, b, c, d) coefficients stay O(1)
over the 2.4-5.8 GHz band (same convention as the ITU-R P.2040 material
tables, which quote the law with frequency in GHz).
"""

import math

C0 = 2.99792458e8          # speed of light, m/s
MU0 = 4.0 * math.pi * 1e-7  # vacuum permeability, H/m
EPS0 = 8.8541878128e-12     # vacuum permittivity, F/m
ETA0 = math.sqrt(MU0 / EPS0)  # vacuum impedance, ~376.73 ohm
F_REF = 1e9                 # dispersion-law frequency normalization, Hz
