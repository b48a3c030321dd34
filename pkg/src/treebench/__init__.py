"""treebench: exact computation on rooted n-ary trees and their symmetry algebras.

Submodules:
  scalars  exact Laurent polynomials in t over the rationals
  words    finite words, boundary points, cylinder sets, simple functions
  groups   prefix-replacement tables (V_n and its Toeplitz extension), normal forms
  algebra  symbolic isometry algebras (Cuntz / Cuntz-Toeplitz normal forms)
  crossed  algebraic crossed products of functions by table groups
  states   traces, quasi-invariant measures, KMS and ground state evaluation
  parsing  text grammar for every element kind
  cli      command-line front end
"""

__version__ = "0.1.0"
