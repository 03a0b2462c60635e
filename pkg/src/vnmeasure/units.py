"""Natural units: hbar = 1, so Planck's h = 2*pi.

Reported energies are multiples of h; internal ones are in hbar = 1 units.
"""
import numpy as np

HBAR = 1.0
PLANCK_H = 2 * np.pi * HBAR


def to_h(energy):
    return energy / PLANCK_H


def from_h(energy_h):
    return energy_h * PLANCK_H
