"""Search for sets with large GCD sums and print them beside the upper-envelope shapes."""

import argparse
import json
import math
from dataclasses import asdict, dataclass, field

from equidist.gcdsums import (
    SearchConfig,
    dyer_harman_bound,
    extremal_search,
    g_alpha,
    gal_envelope,
    gcd_sum_alpha,
)


@dataclass
class Config:
    Ns: list = field(default_factory=lambda: [16, 32, 64])
    alpha: float = 1.0
    search: SearchConfig = field(default_factory=lambda: SearchConfig(iterations=300, restarts=4))


def run(cfg: Config) -> list[dict]:
    rows = []
    for N in cfg.Ns:
        res = extremal_search(N, cfg.alpha, cfg.search)
        row = {"N": N, "found": res.value.value, "initial_segment": gcd_sum_alpha(range(1, N + 1), cfg.alpha).value,
               "set": list(res.best.elements)}
        if cfg.alpha == 1:
            # true only up to an unspecified constant factor
            row["N_loglogN_squared"] = gal_envelope(N)
        else:
            row["dyer_harman"] = dyer_harman_bound(N)
            if cfg.alpha < 1 and N > math.e:
                row["g_alpha"] = g_alpha(cfg.alpha, N)
        rows.append(row)
    return rows


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--Ns", default="16,32,64")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--iterations", type=int, default=300)
    a = p.parse_args()
    cfg = Config([int(t) for t in a.Ns.split(",")], a.alpha, SearchConfig(seed=a.seed, iterations=a.iterations))
    print(json.dumps(run(cfg), indent=2))
