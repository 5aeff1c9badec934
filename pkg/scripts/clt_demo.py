"""KS distance to the normal law for sum cos(2 pi n_k x) / sqrt(N/2): lacunary vs. full sequence."""

import argparse
import json
from dataclasses import asdict, dataclass

from equidist.experiments import RngSpec, clt_experiment
from equidist.sequences import DilationSequence, geometric_dilation


@dataclass
class Config:
    N: int = 1024
    M: int = 2000
    theta: int = 2
    seed: int = 12345


def run(cfg: Config) -> dict:
    rng = RngSpec(cfg.seed)
    lac = clt_experiment(geometric_dilation(cfg.theta, cfg.N), cfg.N, cfg.M, rng)
    flat = clt_experiment(DilationSequence(tuple(range(1, cfg.N + 1))), cfg.N, cfg.M, rng)
    return {"config": asdict(cfg), "ks_geometric": lac.ks, "ks_full": flat.ks,
            "ratio_geometric": lac.ratio, "ratio_full": flat.ratio}


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    for name, default in asdict(Config()).items():
        p.add_argument(f"--{name}", type=int, default=default)
    print(json.dumps(run(Config(**vars(p.parse_args()))), indent=2))
