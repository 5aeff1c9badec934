"""Band of N D*_N / sqrt(2 N log log N) for <theta^k x> over random x, next to the a.s. limsup."""

import argparse
import json
from dataclasses import asdict, dataclass

import numpy as np

from equidist.experiments import RngSpec, fukuyama_band, fukuyama_constant


@dataclass
class Config:
    theta: int = 2
    paths: int = 20
    max_log2_N: int = 16
    seed: int = 0


def run(cfg: Config) -> dict:
    Ns = [2 ** j for j in range(4, cfg.max_log2_N + 1)]
    reps = fukuyama_band(cfg.theta, Ns, RngSpec(cfg.seed), cfg.paths)
    vals = np.array([r.normalized for r in reps])
    return {
        "config": asdict(cfg),
        "limsup_constant": fukuyama_constant(cfg.theta),
        "Ns": Ns,
        "band_min": vals.min(axis=0).tolist(),
        "band_median": np.median(vals, axis=0).tolist(),
        "band_max": vals.max(axis=0).tolist(),
    }


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    for name, default in asdict(Config()).items():
        p.add_argument(f"--{name}", type=int, default=default)
    out = run(Config(**vars(p.parse_args())))
    print(f"a.s. limsup for theta={out['config']['theta']}: {out['limsup_constant']:.5f}")
    for row in zip(out["Ns"], out["band_min"], out["band_median"], out["band_max"]):
        print("N=%-8d min %.3f  median %.3f  max %.3f" % row)
