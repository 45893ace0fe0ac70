"""Regenerate the committed circuit corpus.

Running this script rewrites corpus/accuracy and corpus/small in place.
Generation is fully deterministic, so a rerun after a clean checkout is a
no-op; the files are committed so that measured results stay tied to a
fixed set of circuits.
"""

import pathlib

from serprop import emit_bench, random_dag

HERE = pathlib.Path(__file__).resolve().parent

# (n_inputs, n_gates) per accuracy circuit; gate counts sweep 30..150
ACCURACY = [
    (8, 30), (10, 36), (12, 42), (14, 49), (16, 55),
    (9, 61), (11, 68), (13, 74), (15, 80), (16, 87),
    (8, 93), (10, 99), (12, 106), (14, 112), (16, 118),
    (9, 125), (11, 131), (13, 137), (15, 144), (12, 150),
]

SMALL = [(6, 15 + k) for k in range(10)]


def write(path: pathlib.Path, netlist) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(emit_bench(netlist))


def main() -> None:
    for k, (n_in, n_gates) in enumerate(ACCURACY, start=1):
        name = f"rc{k:02d}"
        # locality 0.2 keeps reconvergent spans short enough that the
        # first-order polarity model stays within its documented accuracy
        nl = random_dag(n_in, n_gates, seed=1000 + k, name=name,
                        locality=0.2)
        write(HERE / "accuracy" / f"{name}.bench", nl)
    for k, (n_in, n_gates) in enumerate(SMALL, start=1):
        name = f"sm{k:02d}"
        nl = random_dag(n_in, n_gates, seed=2000 + k, name=name)
        write(HERE / "small" / f"{name}.bench", nl)
    print("corpus regenerated")


if __name__ == "__main__":
    main()
