#!/usr/bin/env python3
"""Smoke test for the gridframe_py extension module.

Builds nothing itself: it locates the compiled cdylib under target/,
copies it into a temp directory under the importable module name, and
exercises the main entry points. Build the module first with

    cargo build -p gridframe-py            # or --release

then run

    python3 python/smoke_test.py
"""

import math
import shutil
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def load_module():
    candidates = []
    for profile in ("release", "debug"):
        for pattern in ("libgridframe_py.so", "libgridframe_py.dylib", "gridframe_py.dll"):
            candidates.extend((REPO / "target" / profile).glob(pattern))
    if not candidates:
        sys.exit("gridframe_py cdylib not found; run `cargo build -p gridframe-py` first")
    lib = max(candidates, key=lambda p: p.stat().st_mtime)
    stage = Path(tempfile.mkdtemp(prefix="gridframe-py-"))
    suffix = ".pyd" if lib.suffix == ".dll" else ".so"
    shutil.copy2(lib, stage / f"gridframe_py{suffix}")
    sys.path.insert(0, str(stage))
    import gridframe_py

    return gridframe_py


def check(label, condition):
    if not condition:
        sys.exit(f"FAIL {label}")
    print(f"PASS {label}")


def main():
    gf = load_module()
    fs = 1000.0

    cfg = gf.ThreePhaseConfig.balanced(1.0, 50.0, fs)
    samples = gf.synth(cfg, 2000)
    check("synth length", len(samples) == 2000)
    check("synth first sample", abs(samples[0][0] - 1.0) < 1e-12
          and abs(samples[0][1] + 0.5) < 1e-12)

    full = gf.clarke_full(samples)
    check("balanced zero sequence", max(abs(row[0]) for row in full) < 1e-9)

    cx = gf.clarke_complex(samples)
    check("clarke complex magnitude", abs(abs(cx[0]) - math.sqrt(1.5)) < 1e-9)

    ab = gf.clarke_reduced(samples)
    dq = gf.park(ab, [cfg.omega() * k for k in range(len(ab))])
    spread = max(p[0] for p in dq) - min(p[0] for p in dq)
    check("park at signal frequency is constant", spread < 1e-9)

    zero, pos, neg = gf.symmetrical(cfg)
    check("balanced negative sequence vanishes", abs(neg) < 1e-12)
    check("balanced positive sequence", abs(pos - math.sqrt(1.5)) < 1e-9)

    cov = gf.empirical_covariance(samples)
    vals, vecs = gf.eigen3(cov)
    check("rank-2 covariance", gf.rank_estimate(cov, 1e-6) == 2)
    check("degenerate eigen pair", abs(vals[0] - vals[1]) < 1e-9 and vals[2] < 1e-9)
    q3 = vecs[2]
    check("null direction is the common mode",
          max(abs(x - 1 / math.sqrt(3)) for x in q3) < 1e-6)

    trace = gf.run_pipeline(samples, mu=0.01, sample_rate_hz=fs)
    check("balanced frequency estimate", abs(trace["freq_hz"][-1] - 50.0) < 0.05)
    check("balanced vuf", abs(trace["kappa"][-1]) < 1e-6)

    sagged = cfg.with_sag_applied("D", 0.5)
    sag_samples = gf.synth(sagged, 5000)
    trace = gf.run_pipeline(sag_samples, mu=0.01, sample_rate_hz=fs)
    _, pos, neg = gf.sequence_from_waveform(sagged)
    kappa_oracle = neg / pos
    check("sagged vuf tracks the sequence ratio",
          abs(trace["kappa"][-1] - kappa_oracle) < 1e-3)
    state, mag = gf.classify(trace["kappa"][-1])
    check("sagged run classifies Unbalanced", state == "Unbalanced" and mag > 0.3)

    raw_circ = gf.circularity(gf.clarke_complex(sag_samples))
    tail = trace["m_bar"][3000:]
    adaptive_circ = gf.circularity(tail)
    check("self-balancing restores circularity",
          adaptive_circ["coefficient"] < 0.05 < raw_circ["coefficient"])

    omega = 0.23 * math.pi
    kappa = 0.4 * complex(math.cos(1.1), math.sin(1.1))
    h, g = gf.wlar_weights(omega, kappa)
    w, low = gf.extract_frequency(h, g)
    k2, _ = gf.extract_vuf(h, g)
    check("weight round trip", abs(w - omega) < 1e-10 and abs(k2 - kappa) < 1e-10
          and not low)

    print("all smoke tests passed")


if __name__ == "__main__":
    main()
