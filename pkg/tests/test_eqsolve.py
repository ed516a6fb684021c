import pytest

from vset import (
    ATOM,
    ATOM_TERM,
    ONE,
    ZERO,
    ConstLeaf,
    EquationSystem,
    FiniteMap,
    IndexSet,
    SubTerm,
    TupleNode,
    TupleTerm,
    VarLeaf,
    atom,
    build,
    case_map,
    construct,
    expand,
    inl,
    inl_map,
    inr,
    inr_map,
    kpair,
    minimize,
    random_element,
    random_elements,
    random_finite_map,
    random_system,
    sigma_embed,
    solve,
    subst,
    sum_map,
    sum_object,
    term_variables,
    tuple_element,
    vpair_element,
    zero,
)

I2 = IndexSet(2)


def _stream_system(index=I2):
    return EquationSystem(index, {"x": TupleTerm((ConstLeaf(atom(index)), VarLeaf("x")))})


def test_solve_atom():
    f = solve(EquationSystem(I2, {"x": ATOM_TERM}))
    assert f["x"] == atom(I2)


def test_solve_stream():
    x = solve(_stream_system())["x"]
    assert x == build(I2, {"s": TupleNode(("a", "s")), "a": ATOM}, "s")
    assert expand(x, 3) == construct([kpair(ZERO, ZERO), kpair(ONE, kpair(ZERO, ZERO))])


def test_solve_shared_variable():
    f = solve(
        EquationSystem(I2, {"x": TupleTerm((VarLeaf("y"), VarLeaf("y"))), "y": ATOM_TERM})
    )
    assert expand(f["x"], 2) == construct([kpair(ZERO, ZERO), kpair(ONE, ZERO)])


def test_solve_mutual_recursion():
    f = solve(
        EquationSystem(
            I2,
            {
                "a": TupleTerm((SubTerm(ATOM_TERM), VarLeaf("b"))),
                "b": TupleTerm((ConstLeaf(atom(I2)), VarLeaf("a"))),
            },
        )
    )
    assert f["a"] == f["b"]
    assert f["a"] == solve(_stream_system())["x"]


def test_solve_deterministic():
    sys = _stream_system()
    first, second = solve(sys)["x"], solve(sys)["x"]
    assert first.coalgebra.trans == second.coalgebra.trans
    assert first.root == second.root


def test_solve_errors():
    with pytest.raises(ValueError, match="'y'"):
        solve(EquationSystem(I2, {"x": TupleTerm((VarLeaf("y"), SubTerm(ATOM_TERM)))}))
    with pytest.raises(ValueError, match="arity"):
        solve(EquationSystem(I2, {"x": TupleTerm((VarLeaf("x"),))}))
    with pytest.raises(ValueError):
        foreign = ConstLeaf(atom(IndexSet(3)))
        solve(EquationSystem(I2, {"x": TupleTerm((foreign, VarLeaf("x")))}))


def test_term_variables():
    term = TupleTerm((VarLeaf("x"), SubTerm(TupleTerm((VarLeaf("y"), ConstLeaf(zero(I2)))))))
    assert term_variables(term) == {"x", "y"}
    assert term_variables(ATOM_TERM) == set()


def test_solution_law(rng):
    for _ in range(100):
        sys = random_system(rng, I2)
        f = solve(sys)
        for x, term in sys.equations.items():
            assert f[x] == subst(f, term, sys.index)


def test_solution_law_index_3(rng):
    i3 = IndexSet(3)
    for _ in range(30):
        sys = random_system(rng, i3, max_vars=3)
        f = solve(sys)
        for x, term in sys.equations.items():
            assert f[x] == subst(f, term)


def _rename(term, names):
    if not isinstance(term, TupleTerm):
        return term
    leaves = []
    for leaf in term.leaves:
        if isinstance(leaf, VarLeaf):
            leaves.append(VarLeaf(names[leaf.name]))
        elif isinstance(leaf, SubTerm):
            leaves.append(SubTerm(_rename(leaf.term, names)))
        else:
            leaves.append(leaf)
    return TupleTerm(tuple(leaves))


def test_solution_unique_under_permutation(rng):
    for _ in range(50):
        sys = random_system(rng, I2)
        variables = list(sys.equations)
        order = [variables[i] for i in rng.permutation(len(variables))]
        names = {x: ("renamed", x) for x in variables}
        permuted = EquationSystem(
            I2, {names[x]: _rename(sys.equations[x], names) for x in order}
        )
        f, g = solve(sys), solve(permuted)
        assert all(f[x] == g[names[x]] for x in variables)


def test_subst_examples():
    f = {"x": atom(I2)}
    assert subst(f, ATOM_TERM) == atom(I2)
    assert subst(f, TupleTerm((VarLeaf("x"), VarLeaf("x")))) == tuple_element(
        I2, [atom(I2), atom(I2)]
    )
    assert subst({}, TupleTerm((ConstLeaf(zero(I2)), ConstLeaf(zero(I2))))) == zero(I2)


def test_subst_errors():
    with pytest.raises(ValueError):
        subst({}, TupleTerm((VarLeaf("x"), VarLeaf("x"))))
    with pytest.raises(ValueError):
        subst({}, ATOM_TERM)
    with pytest.raises(ValueError):
        subst({}, TupleTerm((SubTerm(ATOM_TERM),)), I2)


def test_subst_is_homomorphic(rng):
    for _ in range(50):
        sys = random_system(rng, I2)
        f = solve(sys)
        for term in sys.equations.values():
            if not isinstance(term, TupleTerm):
                continue
            components = []
            for leaf in term.leaves:
                if isinstance(leaf, VarLeaf):
                    components.append(f[leaf.name])
                elif isinstance(leaf, SubTerm):
                    components.append(subst(f, leaf.term, I2))
                else:
                    components.append(leaf.element)
            assert subst(f, term) == tuple_element(I2, components)


def test_sigma_embed_examples():
    assert sigma_embed(atom(I2)) == ATOM_TERM
    assert sigma_embed(zero(I2)) == TupleTerm((ConstLeaf(zero(I2)), ConstLeaf(zero(I2))))
    assert sigma_embed(vpair_element(atom(I2), zero(I2))) == TupleTerm(
        (SubTerm(ATOM_TERM), ConstLeaf(zero(I2)))
    )
    stream = solve(_stream_system())["x"]
    assert term_variables(sigma_embed(stream)) == set()


def test_embedding_law(rng):
    for _ in range(50):
        u = random_element(rng, I2, max_states=5)
        f = {"x0": random_element(rng, I2)}
        term = sigma_embed(u)
        assert term_variables(term) == set()
        assert subst(f, term, I2) == u


def test_variable_free_system_matches_build(rng):
    expected = build(I2, {0: TupleNode((1, 2)), 1: ATOM, 2: TupleNode((2, 2))}, 0)
    sys = EquationSystem(I2, {"x": TupleTerm((SubTerm(ATOM_TERM), ConstLeaf(zero(I2))))})
    assert solve(sys)["x"] == expected

    for _ in range(50):
        u = random_element(rng, I2)
        assert solve(EquationSystem(I2, {"u": sigma_embed(u)}))["u"] == u


def test_finite_map():
    stream = solve(_stream_system())["x"]
    unrolled = build(I2, {0: TupleNode((2, 1)), 1: TupleNode((2, 0)), 2: ATOM}, 0)
    m = FiniteMap({stream: atom(I2), zero(I2): zero(I2)})
    assert len(m) == 2
    assert unrolled in m
    assert m(unrolled) == atom(I2)
    assert m.domain == {stream, zero(I2)}
    assert m.image() == {atom(I2), zero(I2)}
    with pytest.raises(ValueError):
        m(atom(I2))

    for key, _ in m.items():
        assert key.coalgebra.trans == minimize(key).coalgebra.trans


def test_finite_map_rejects_non_functions():
    stream = solve(_stream_system())["x"]
    unrolled = build(I2, {0: TupleNode((2, 1)), 1: TupleNode((2, 0)), 2: ATOM}, 0)
    with pytest.raises(ValueError, match="not a function"):
        FiniteMap([(stream, atom(I2)), (unrolled, zero(I2))])

    m = FiniteMap([(stream, atom(I2)), (unrolled, atom(I2))])
    assert len(m) == 1
    assert m(unrolled) == atom(I2)


def test_finite_map_compose():
    a, z = atom(I2), zero(I2)
    swap = FiniteMap({a: z, z: a})
    assert swap @ swap == FiniteMap.identity([a, z])
    assert swap.compose(FiniteMap({a: a})) == FiniteMap({a: z})
    with pytest.raises(ValueError):
        FiniteMap({a: a}) @ swap


def test_injections():
    a = atom(I2)
    assert expand(inl(a), 2) == construct([kpair(ONE, ZERO)])
    assert inl(a) != inr(a)
    assert inl(zero(I2)) == zero(I2)
    assert sum_object([a], [a]) == {inl(a), inr(a)}


def test_case_map_index_mismatch():
    i3 = IndexSet(3)
    with pytest.raises(ValueError):
        case_map(FiniteMap({atom(I2): atom(I2)}), FiniteMap({atom(i3): atom(i3)}))


def test_coproduct_laws(rng):
    for _ in range(100):
        a_set, b_set, c_set, d_set = (
            random_elements(rng, I2, int(rng.integers(1, 4))) for _ in range(4)
        )
        a2_set, b2_set = (random_elements(rng, I2, int(rng.integers(1, 4))) for _ in range(2))

        f = random_finite_map(rng, a_set, c_set)
        g = random_finite_map(rng, b_set, c_set)
        h = random_finite_map(rng, c_set, d_set)
        j = random_finite_map(rng, a2_set, a_set)
        k = random_finite_map(rng, b2_set, b_set)
        fg = case_map(f, g)

        assert fg @ inl_map(a_set) == f
        assert fg @ inr_map(b_set) == g
        assert case_map(inl_map(a_set), inr_map(b_set)) == FiniteMap.identity(
            sum_object(a_set, b_set)
        )
        assert h @ fg == case_map(h @ f, h @ g)
        assert sum_map(j, k) @ inl_map(a2_set) == inl_map(a_set) @ j
        assert sum_map(j, k) @ inr_map(b2_set) == inr_map(b_set) @ k
        assert fg @ sum_map(j, k) == case_map(f @ j, g @ k)


def test_sum_map_definition(rng):
    for _ in range(20):
        a_set, b_set = (random_elements(rng, I2, 3) for _ in range(2))
        j = random_finite_map(rng, a_set, a_set)
        k = random_finite_map(rng, b_set, b_set)
        assert sum_map(j, k) == case_map(inl_map(a_set) @ j, inr_map(b_set) @ k)
