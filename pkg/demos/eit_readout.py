"""Simulated EIT readout of the dressed manifold.

Solves the steady-state master equation for the full ladder (ground
doublet, intermediate manifold, RF-coupled Rydberg pair) while the
coupling laser detuning is scanned, then stacks spectra over a grid of
phase angles into a spectrogram.  Peaks sit at omega_rf times the dressed
eigenvalues; their prominences encode the optics.
"""

import math
import os

import numpy as np

from rydpol.dressing import TransitionClass, eigen_spectrum
from rydpol.eitsim import (
    SimParams,
    eit_spectrogram,
    eit_spectrum,
    scheme_for_class,
    write_spectrogram_csv,
)

OUT_DIR = os.path.join(os.path.dirname(__file__), "output")


def main():
    os.makedirs(OUT_DIR, exist_ok=True)
    params = SimParams(coupling_detuning_grid=tuple(np.linspace(-60, 60, 241)))

    for cls in (TransitionClass.of(0.5, 0), TransitionClass.of(1.5, 1)):
        scheme = scheme_for_class(cls)
        phi = 1.0
        spec = eit_spectrum(scheme, params, phi)
        lines = np.sort(np.unique(np.round(
            params.omega_rf * eigen_spectrum(cls, phi).eigenvalues, 3)))
        print("class %s, phi = %.2f rad" % (cls.label(), phi))
        print("  dressed lines (MHz): %s" % ", ".join("%.2f" % v for v in lines))
        top = spec.detuning_mhz[np.argsort(spec.response)[-len(lines):]]
        print("  strongest response near: %s" %
              ", ".join("%.2f" % v for v in np.sort(top)))

        phi_grid = np.linspace(0.0, 2.0 * math.pi, 25)
        spg = eit_spectrogram(scheme, params, phi_grid)
        name = cls.label().replace("/", "_").replace("^", "")
        path = os.path.join(OUT_DIR, "eit_%s.csv" % name)
        write_spectrogram_csv(path, spg)
        print("  spectrogram -> %s" % path)
        print()


if __name__ == "__main__":
    main()
