"""Write the shipped model files into fixtures/."""

from pathlib import Path

from nvnielsen.model import dump_model
from nvnielsen.zoo import (
    colliding_klein_map,
    degenerate_klein_map,
    klein,
    klein_map,
    p2,
    torus_map_example,
)

OUT = Path(__file__).resolve().parent.parent / "fixtures"


def main():
    OUT.mkdir(exist_ok=True)
    files = {
        "klein.json": (klein(), klein_map()),
        "torus3.json": torus_map_example(),
        "klein_degenerate.json": (klein(), degenerate_klein_map()),
        "klein_collision.json": (klein(), colliding_klein_map()),
        "p2.json": (p2(), None),
    }
    for name, (group, lift) in files.items():
        (OUT / name).write_text(dump_model(group, lift))
        print("wrote", OUT / name)


if __name__ == "__main__":
    main()
