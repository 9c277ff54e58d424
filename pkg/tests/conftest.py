import json
from pathlib import Path

import pytest

from dglogic import AnnotatedGraph, EquivDungModel, graph_from_dict

DATA = Path(__file__).parent / "data"


def load_json(name):
    with open(DATA / name, encoding="utf-8") as fh:
        return json.load(fh)


def mk_equiv(ids, attacks):
    """An equivalence-equipped model from node -> ID plus attack pairs."""
    anno = {u: [i] for u, i in ids.items()}
    anno.update({e: ["attacks"] for e in attacks})
    return EquivDungModel(AnnotatedGraph(list(ids), attacks, anno))


CHAIN_IDS = {"u1": "ID1", "u2": "ID2", "u3": "ID3", "u4": "ID4", "u5": "ID3"}
CHAIN_ATTACKS = [("u1", "u2"), ("u2", "u3"), ("u4", "u5")]
CYCLE_IDS = {"u1": "ID1", "u2": "ID2", "u3": "ID3",
             "u4": "ID1", "u5": "ID4", "u6": "ID3"}
CYCLE_ATTACKS = [("u1", "u2"), ("u2", "u3"), ("u4", "u5"),
                 ("u5", "u4"), ("u5", "u6")]


@pytest.fixture(scope="session")
def chain_model():
    return EquivDungModel(graph_from_dict(load_json("attack_chain.json")))


@pytest.fixture(scope="session")
def cycle_model():
    return EquivDungModel(graph_from_dict(load_json("attack_cycle.json")))


@pytest.fixture(scope="session")
def toulmin_graph():
    return graph_from_dict(load_json("toulmin.json"))


@pytest.fixture(scope="session")
def toulmin_skeleton():
    return graph_from_dict(load_json("toulmin_pattern.json"), skeleton=True)
