"""Write a Haar-random circuit file and a random two-qudit state file.

    python scripts/make_inputs.py --n 6 --d 2 --seed 3 --statistics fermion --out data/
"""
import argparse
import json
from pathlib import Path

import numpy as np

from linpovm.io import state_to_dict, unitary_to_dict
from linpovm.modes import random_unitary
from linpovm.states import random_state


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--statistics", choices=["boson", "fermion"], default="boson")
    p.add_argument("--out", default=".")
    args = p.parse_args()

    rng = np.random.default_rng(args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    tag = f"n{args.n}_d{args.d}_s{args.seed}"
    (out / f"circuit_{tag}.json").write_text(json.dumps(unitary_to_dict(random_unitary(args.n, rng)), indent=1))
    state = random_state(args.d, rng, args.statistics)
    (out / f"state_{tag}.json").write_text(json.dumps(state_to_dict(state), indent=1))
    print(out / f"circuit_{tag}.json", out / f"state_{tag}.json")


if __name__ == "__main__":
    main()
