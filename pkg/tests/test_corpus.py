"""Bundled graph families, the hard-pair library, and dataset files."""

import itertools
import json

import numpy as np
import pytest

from isobench import (
    ContractError,
    CorpusIntegrityError,
    Graph,
    GraphParseError,
    PairingWarning,
    are_isomorphic,
    complete,
    cycle,
    disjoint_cycles,
    erdos_renyi,
    generate,
    hard_pair_library,
    library_manifest,
    load_dataset,
    pairs_from_graphs,
    path,
    rook4x4,
    shrikhande,
    srg_parameters,
    star,
    wl1_signature,
    write_edge_list,
    write_graph6,
)


def has_k4(g: Graph) -> bool:
    nodes = range(g.n)
    return any(
        all(g.has_edge(a, b) for a, b in itertools.combinations(quad, 2))
        for quad in itertools.combinations(nodes, 4)
    )


class TestFamilies:
    def test_cycle(self):
        g = cycle(5)
        assert g.n == 5 and len(g.edges) == 5
        assert all(d == 2 for d in g.degrees)

    def test_path_star_complete(self):
        assert len(path(6).edges) == 5
        assert star(6).degrees[0] == 5
        assert len(complete(5).edges) == 10

    def test_disjoint_cycles(self):
        g = disjoint_cycles([3, 4, 5])
        assert g.n == 12 and len(g.edges) == 12

    def test_size_guards(self):
        with pytest.raises(ContractError):
            cycle(2)
        with pytest.raises(ContractError):
            disjoint_cycles([])
        with pytest.raises(ContractError):
            disjoint_cycles([2])

    def test_random_graph_is_reproducible(self):
        a = erdos_renyi(12, 0.4, seed=5)
        b = erdos_renyi(12, 0.4, seed=5)
        assert a == b
        assert a != erdos_renyi(12, 0.4, seed=6)

    def test_random_graph_extremes(self):
        assert erdos_renyi(6, 0.0, seed=0).edges == ()
        assert len(erdos_renyi(6, 1.0, seed=0).edges) == 15

    def test_random_graph_guards(self):
        with pytest.raises(ContractError):
            erdos_renyi(3, 1.5, seed=0)
        with pytest.raises(ContractError):
            erdos_renyi(-1, 0.5, seed=0)

    def test_generate_dispatch(self):
        assert generate("cycle", {"n": 4}) == cycle(4)
        assert generate("erdos_renyi", {"n": 5, "p": 0.5}, seed=3) == erdos_renyi(5, 0.5, 3)
        with pytest.raises(ContractError):
            generate("torus", {})
        with pytest.raises(ContractError):
            generate("erdos_renyi", {"n": 5, "p": 0.5})


class TestStronglyRegularPair:
    def test_both_have_srg_parameters(self):
        assert srg_parameters(rook4x4()) == (16, 6, 2, 2)
        assert srg_parameters(shrikhande()) == (16, 6, 2, 2)

    def test_non_srg_is_rejected(self):
        with pytest.raises(CorpusIntegrityError):
            srg_parameters(path(5))

    def test_clique_structure_separates_them(self):
        assert has_k4(rook4x4())
        assert not has_k4(shrikhande())

    def test_same_refinement_class(self):
        assert wl1_signature(rook4x4()).digest == wl1_signature(shrikhande()).digest


class TestLibrary:
    def test_manifest_shape(self):
        manifest = library_manifest()
        assert len(manifest.entries) == 4
        names = [e.name for e in manifest.entries]
        assert names == [
            "c6_vs_2c3",
            "c8_vs_2c4",
            "rook4x4_vs_shrikhande",
            "k4_vs_relabeled_k4",
        ]

    def test_manifest_serializes(self):
        data = json.loads(library_manifest().to_json())
        assert data[0]["left"]["family"] == "cycle"
        assert "non_isomorphic" in data[0]["expect"]

    def test_library_labels(self):
        ds = hard_pair_library()
        assert [p.isomorphic for p in ds.pairs] == [False, False, False, True]
        assert all(p.verified for p in ds.pairs)

    def test_library_pairs_check_out(self):
        ds = hard_pair_library(verify=False)
        for pair in ds.pairs[:3]:
            assert not are_isomorphic(pair.left, pair.right).isomorphic
        last = ds.pairs[3]
        assert are_isomorphic(last.left, last.right).isomorphic


class TestDatasetFiles:
    def test_graph6_file_round_trip(self, tmp_path):
        graphs = [cycle(6), disjoint_cycles([3, 3]), path(4), star(4)]
        file = tmp_path / "pairs.g6"
        file.write_text("".join(write_graph6(g) + "\n" for g in graphs))
        back = load_dataset(str(file))
        assert [g.edges for g in back] == [g.edges for g in graphs]

    def test_edge_list_file_round_trip(self, tmp_path):
        a = Graph(3, ((0, 1), (1, 2)), np.array([[0.5], [1.5], [-2.0]]))
        b = Graph(2, ((0, 1),))
        file = tmp_path / "pairs.el"
        file.write_text(write_edge_list(a) + "\n" + write_edge_list(b))
        back = load_dataset(str(file))
        assert back[0] == a and back[1] == b

    def test_format_inference_and_override(self, tmp_path):
        file = tmp_path / "data.weird"
        file.write_text("Bw\nBw\n")
        with pytest.raises(ContractError):
            load_dataset(str(file))
        assert len(load_dataset(str(file), fmt="graph6")) == 2
        with pytest.raises(ContractError):
            load_dataset(str(file), fmt="adjacency")

    def test_parse_error_names_file_and_line(self, tmp_path):
        file = tmp_path / "bad.g6"
        file.write_text("Bw\nB\n")
        with pytest.raises(GraphParseError) as err:
            load_dataset(str(file))
        assert f"{file}:2:" in str(err.value)

    def test_edge_list_error_points_into_block(self, tmp_path):
        file = tmp_path / "bad.el"
        file.write_text("2 1\n0 1\n\n2 1\n0 5\n")
        with pytest.raises(GraphParseError) as err:
            load_dataset(str(file))
        assert f"{file}:5:" in str(err.value)

    def test_odd_count_warns(self, tmp_path):
        file = tmp_path / "odd.g6"
        file.write_text("Bw\nBw\nBw\n")
        with pytest.warns(PairingWarning):
            load_dataset(str(file))

    def test_pairs_from_graphs_folds_consecutively(self):
        ds = pairs_from_graphs([cycle(6), disjoint_cycles([3, 3])], "demo")
        assert len(ds.pairs) == 1
        assert ds.pairs[0].origin == "demo"
        assert not ds.pairs[0].isomorphic

    def test_pairs_from_graphs_catches_wrong_default_label(self):
        with pytest.raises(CorpusIntegrityError):
            pairs_from_graphs([path(3), path(3)], "demo")
