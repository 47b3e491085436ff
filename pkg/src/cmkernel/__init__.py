"""Kernel coefficients, CM cycles and height pairings for twisted central value formulas over Q."""
from .arith import hilbert, kronecker, valuation
from .cmfield import CMField, HeckeCharacter, RayClassGroup
from .kernel import KernelParams

__all__ = ["CMField", "HeckeCharacter", "KernelParams", "RayClassGroup", "hilbert", "kronecker",
           "valuation"]
