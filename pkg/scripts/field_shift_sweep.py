"""Monte Carlo shift recovery across small fields and rings, one row per instance.

    python3 scripts/field_shift_sweep.py --trials 5000 --seed 1
"""
import argparse
import json
from dataclasses import asdict, dataclass

from cosetforge.experiments import ExperimentConfig, run_experiment


@dataclass
class SweepConfig:
    trials: int = 5000
    seed: int = 0
    fields: tuple = ((3, 1), (5, 1), (7, 1), (3, 2), (5, 2), (3, 3))
    rings: tuple = (15, 45, 105)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=SweepConfig.trials)
    ap.add_argument("--seed", type=int, default=SweepConfig.seed)
    cfg = SweepConfig(**vars(ap.parse_args()))
    rows = []
    for p, m in cfg.fields:
        rows.append(run_experiment(ExperimentConfig("field-shift", p=p, m=m, trials=cfg.trials, seed=cfg.seed)))
    for n in cfg.rings:
        rows.append(run_experiment(ExperimentConfig("zn-shift", n=n, trials=cfg.trials, seed=cfg.seed)))
    print(f"{'domain':>8} {'exact':>8} {'empirical':>10} {'99% CI':>20}  4sigma")
    for r in rows:
        ci = f"[{r['ci99Low']:.4f}, {r['ci99High']:.4f}]"
        print(f"{r['domain']:>8} {r['exactRate']:8.4f} {r['empiricalRate']:10.4f} {ci:>20}  {r['withinFourSigma']}")
    print(json.dumps({"config": asdict(cfg)}, sort_keys=True))


if __name__ == "__main__":
    main()
