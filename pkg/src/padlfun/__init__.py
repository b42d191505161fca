"""p-adic zeta and L-functions, Iwasawa series, and families of Siegel-Eisenstein coefficients."""

__version__ = "0.1.0"
