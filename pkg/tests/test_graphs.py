"""Graph labelings: builders, verifier, and the three searchers."""

import pytest

from elegantprimes.graphs import (
    GraphInstance,
    StochasticConfig,
    complete,
    exhaustive_graph_search,
    format_edge_list,
    graph_by_name,
    parse_edge_list,
    path_graph,
    petersen,
    regular_caterpillar,
    star,
    star_elegant_labeling,
    stochastic_graph_search,
    verify_graph_labeling,
)

# verified by hand: differences cover {2,4,...,2r} with distinct pool primes
COMPLETE_CLAIMS = {
    2: [3, 5],
    3: [5, 7, 11],
    4: [7, 11, 17, 19],
}


# ----------------------------------------------------------------- builders


def test_builder_shapes():
    assert path_graph(5).edge_count == 4
    assert star(7).edge_count == 6
    assert complete(5).edge_count == 10
    assert petersen().vertex_count == 10
    assert petersen().edge_count == 15
    assert all(d == 3 for d in petersen().degrees())


def test_caterpillar_structure():
    g = regular_caterpillar(4)
    assert g.vertex_count == 10
    assert g.edge_count == 9
    deg = g.degrees()
    assert deg[:4] == [3, 3, 3, 3]  # spine
    assert all(d == 1 for d in deg[4:])  # leaves


def test_builder_size_floors():
    for builder in (path_graph, star, complete, regular_caterpillar):
        with pytest.raises(ValueError):
            builder(1)


def test_instance_validation():
    with pytest.raises(ValueError, match="outside vertex range"):
        GraphInstance(2, ((0, 2),))
    with pytest.raises(ValueError, match="loop"):
        GraphInstance(2, ((1, 1),))
    with pytest.raises(ValueError, match="not sorted"):
        GraphInstance(2, ((1, 0),))
    with pytest.raises(ValueError, match="duplicate edge"):
        GraphInstance(2, ((0, 1), (0, 1)))


def test_graph_by_name():
    assert graph_by_name("petersen").name == "petersen"
    assert graph_by_name("star:5").edges == star(5).edges
    assert graph_by_name("Complete:4").edge_count == 6
    assert graph_by_name("caterpillar:3").vertex_count == 8
    with pytest.raises(ValueError):
        graph_by_name("petersen:3")
    with pytest.raises(ValueError):
        graph_by_name("star")
    with pytest.raises(ValueError):
        graph_by_name("wheel:5")


def test_edge_list_round_trip():
    g = petersen()
    again = parse_edge_list(format_edge_list(g), name="petersen")
    assert again.edges == g.edges
    assert again.vertex_count == g.vertex_count


def test_edge_list_parsing():
    g = parse_edge_list("# triangle\n0 1\n\n1 2\n0 2\n")
    assert g.edges == ((0, 1), (0, 2), (1, 2))
    with pytest.raises(ValueError, match="line 2"):
        parse_edge_list("0 1\n1 2 3\n")
    with pytest.raises(ValueError, match="no edges"):
        parse_edge_list("# nothing here\n")


# ----------------------------------------------------------------- verifier


@pytest.mark.parametrize("k,labels", sorted(COMPLETE_CLAIMS.items()))
def test_complete_graph_claims_verify(k, labels):
    assert verify_graph_labeling(complete(k), labels)


def test_verifier_reason_codes():
    g = complete(4)
    assert verify_graph_labeling(g, [3, 5, 7, 11]).reason == "duplicate_gap"
    assert verify_graph_labeling(g, [7, 11, 17]).reason == "label_count"
    assert verify_graph_labeling(g, [7, 11, 17, 9]).reason == "non_prime"
    assert verify_graph_labeling(g, [2, 11, 17, 19]).reason == "non_prime"
    assert verify_graph_labeling(g, [7, 11, 17, 23]).reason == "out_of_pool"
    assert verify_graph_labeling(g, [7, 11, 17, 7]).reason == "duplicate_prime"


def test_verifier_accepts_mapping():
    labels = {i: v for i, v in enumerate(COMPLETE_CLAIMS[4])}
    assert verify_graph_labeling(complete(4), labels)
    del labels[2]
    assert verify_graph_labeling(complete(4), labels).reason == "label_count"


def test_verifier_flags_offending_edge():
    res = verify_graph_labeling(complete(4), [3, 5, 7, 11])
    # edges sort as (0,1),(0,2),(0,3),(1,2),...; |5-7| repeats gap 2 at index 3
    assert res.detail == 3


# --------------------------------------------------------------- exhaustive


@pytest.mark.parametrize("k", [2, 3, 4])
def test_exhaustive_finds_complete(k):
    res = exhaustive_graph_search(complete(k))
    assert res.status == "found"
    assert verify_graph_labeling(complete(k), res.labeling)


def test_exhaustive_certifies_no_complete_5():
    res = exhaustive_graph_search(complete(5))
    assert res.status == "none"
    assert res.labeling is None


def test_exhaustive_limit_status():
    res = exhaustive_graph_search(petersen(), limit=100)
    assert res.status == "limit"
    assert res.labeling is None
    assert res.nodes > 100


@pytest.mark.parametrize("n", range(2, 8))
def test_exhaustive_path_graphs_match_oracle(n, oracle_counts):
    res = exhaustive_graph_search(path_graph(n))
    has_elegant = oracle_counts["elegant"][str(n)]["total"] > 0
    assert (res.status == "found") == has_elegant
    if res.labeling is not None:
        assert verify_graph_labeling(path_graph(n), res.labeling)


# -------------------------------------------------------------------- stars


def test_star_solver_catalogue():
    found = {n for n in range(2, 13) if star_elegant_labeling(n) is not None}
    assert found == {2, 3, 5, 6, 9}


def test_star_solver_result_verifies():
    labels = star_elegant_labeling(5)
    assert labels == [11, 3, 5, 7, 13]
    assert verify_graph_labeling(star(5), labels)


@pytest.mark.parametrize("n", range(2, 10))
def test_star_solver_agrees_with_exhaustive(n):
    specialized = star_elegant_labeling(n)
    generic = exhaustive_graph_search(star(n))
    assert generic.status in ("found", "none")
    assert (specialized is not None) == (generic.status == "found")


def test_star_solver_rejects_tiny():
    with pytest.raises(ValueError):
        star_elegant_labeling(1)


# --------------------------------------------------------------- stochastic

PETERSEN_BUDGET = StochasticConfig(seed=0, restarts=40, iters=20_000)


def test_stochastic_labels_petersen():
    labels = stochastic_graph_search(petersen(), PETERSEN_BUDGET)
    assert labels == [19, 11, 13, 17, 29, 3, 37, 31, 23, 7]
    assert verify_graph_labeling(petersen(), labels)


def test_stochastic_is_deterministic():
    a = stochastic_graph_search(complete(4), StochasticConfig(seed=9))
    b = stochastic_graph_search(complete(4), StochasticConfig(seed=9))
    assert a == b
    assert a is not None


def test_stochastic_budget_exhaustion_returns_none():
    # star(4) provably has no elegant labeling; failure certifies nothing
    # but must come back as None rather than a bogus labeling
    cfg = StochasticConfig(seed=1, restarts=3, iters=200, stall_limit=50)
    assert stochastic_graph_search(star(4), cfg) is None


# ------------------------------------------------------------- caterpillars


@pytest.mark.parametrize("spine,expected", [(3, "none"), (4, "none"), (5, "found")])
def test_degree_three_caterpillars(spine, expected):
    res = exhaustive_graph_search(regular_caterpillar(spine))
    assert res.status == expected
    if res.labeling is not None:
        assert verify_graph_labeling(regular_caterpillar(spine), res.labeling)
