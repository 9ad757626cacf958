"""
symspace - rearrangements, Lorentz and Lorentz-Zygmund norms, dilation norms,
tensor-product rearrangements and multiplicator estimates on (0,1].
"""

__version__ = "1.0.0"
