import sys
from pathlib import Path

from impsel import DirectedGraph

sys.path.insert(0, str(Path(__file__).parent))


def graph(n: int, *edges: tuple[int, int]) -> DirectedGraph:
    return DirectedGraph.from_edges(n, edges)
