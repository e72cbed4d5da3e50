"""The pool as a qutrit, and the level structure of the four-state block.

Tracing out one dot leaves a qubit coupled to the pool, which particle
conservation restricts to three Fock levels.  Number superselection
forces the 2x3 state into blocks, its convex decomposition is unique
and the entanglement of formation becomes a weighted average over two
pure sectors.  The negativity of the same state follows from two
closed-form eigenvalues of the partial transpose.

The spectrum report covers the static side.  Every four-state block
carries the dot-sector singlet as an exact zero mode whatever the
parameters, and at U = E = 0 the remaining levels sit at +-sqrt(4n+2),
so the full spread grows like sqrt(n).
"""

import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from dotpool import (
    PureState,
    SystemParams,
    build_tripartite_hamiltonian,
    measure_series,
    sample_trajectory,
    spectrum_report,
)

HERE = pathlib.Path(__file__).resolve().parent

params = SystemParams.from_ratios(n=10, u_over_t=0.2, e_over_t=0.01)
h = build_tripartite_hamiltonian(params)
series = sample_trajectory(h, PureState.basis_state(4, 0), t_max=50.0)
eof = measure_series(series, "eof_qubit_qutrit")
neg = measure_series(series, "negativity_qubit_qutrit")
print(f"trace out one dot, n = 10, U/T = 0.2: max E = {eof.max():.4f}, max N = {neg.max():.4f}")

# singlet zero mode and the sqrt(n) level spread
ns = [2, 4, 8, 16, 32, 64]
spreads = []
for n in ns:
    free = build_tripartite_hamiltonian(SystemParams.from_ratios(n=n))
    report = spectrum_report(free)
    spreads.append(report.spread)
    assert report.singlet_index is not None
print("free block spectra, singlet flagged at eigenvalue 0:")
for n, spread in zip(ns, spreads):
    print(f"  n = {n:>2d}: spread = {spread:8.4f}   2 sqrt(4n+2) = {2*np.sqrt(4*n+2):8.4f}")

report = spectrum_report(h)
print(f"interacting block (n = 10, U/T = 0.2): eigenvalues "
      + ", ".join(f"{x:+.4f}" for x in report.eigenvalues)
      + f", singlet gap {report.singlet_gap:.4f}")

fig, axes = plt.subplots(1, 2, figsize=(9.0, 3.4))
axes[0].plot(series.times, eof, lw=1.0, label="E (sector average)")
axes[0].plot(series.times, neg, lw=1.0, label="N")
axes[0].set_xlabel("t T")
axes[0].set_title("qubit and pool qutrit")
axes[0].legend(frameon=False)

axes[1].loglog(ns, spreads, "o", ms=4.0, label="measured spread")
axes[1].loglog(ns, [2 * np.sqrt(4 * n + 2) for n in ns], "k:", lw=1.0, label="2 sqrt(4n+2)")
axes[1].set_xlabel("n")
axes[1].set_ylabel("level spread / T")
axes[1].set_title("sqrt(n) interlevel scaling")
axes[1].legend(frameon=False)

fig.tight_layout()
out = HERE / "pool_qutrit_levels.png"
fig.savefig(out, dpi=150)
print(f"wrote {out}")
