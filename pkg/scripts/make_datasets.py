"""Regenerate the vendored edge-list files in src/partdos/data/.

karate and lesmis come from networkx (lesmis node names have spaces replaced
by underscores to fit the whitespace-separated edge-list format); the ER
instance is pinned to seed 42 and the caveman ring is generated by partdos
itself.
"""

from pathlib import Path

import networkx as nx

from partdos.graph import make_caveman

DATA = Path(__file__).resolve().parent.parent / "src" / "partdos" / "data"


def write_edges(name, edges):
    lines = [f"{u} {v}" for u, v in edges]
    (DATA / name).write_text("\n".join(lines) + "\n")
    print(name, len(lines), "edges")


def main():
    DATA.mkdir(parents=True, exist_ok=True)

    karate = nx.karate_club_graph()
    write_edges("karate.txt", karate.edges())

    lesmis = nx.les_miserables_graph()
    write_edges("lesmis.txt",
                ((u.replace(" ", "_"), v.replace(" ", "_")) for u, v in lesmis.edges()))

    er = nx.gnp_random_graph(30, 0.2, seed=42)
    write_edges("er_30_02.txt", er.edges())

    cav = make_caveman(20, 5)
    write_edges("caveman_20_5.txt", cav.edges)


if __name__ == "__main__":
    main()
