"""Random small stores and queries in the oracle's tuple form, plus a renderer
that turns a tuple query into SPARQL text for the engine."""

from hypothesis import strategies as st

from rkg.terms import XSD, BlankNode, Iri, Literal, Triple

EX = "http://example.org/"
NODES = [Iri(EX + n) for n in "abc"] + [BlankNode("z")]
PREDS = [Iri(EX + "p"), Iri(EX + "q")]
LITS = [Literal("1", Iri(XSD + "integer")), Literal("2"), Literal("x", lang="en"), Literal("x")]
VARS = ["?a", "?b", "?c", "?d"]
HEADER = [v[1:] for v in VARS]

store_triples = st.lists(
    st.builds(Triple, st.sampled_from(NODES), st.sampled_from(PREDS),
              st.sampled_from(NODES + LITS)), min_size=3, max_size=16)

_var = st.sampled_from(VARS)
# variables are listed several times so most positions stay open and results are non-empty
triple_patterns = st.tuples(
    st.just("tp"),
    st.sampled_from(VARS * 3 + NODES[:3]),
    st.sampled_from(VARS + PREDS),
    st.sampled_from(VARS * 3 + NODES[:3] + LITS),
)

_operand = _var | st.sampled_from(NODES[:3] + LITS)
expressions = st.recursive(
    st.tuples(st.just("bound"), _var)
    | st.tuples(st.sampled_from(["=", "!=", "<", ">"]), _operand, _operand),
    lambda inner: st.tuples(st.just("not"), inner)
    | st.tuples(st.sampled_from(["and", "or"]), inner, inner),
    max_leaves=3,
)


def _groups(depth):
    kinds = [triple_patterns, triple_patterns, st.tuples(st.just("filter"), expressions)]
    if depth > 0:
        sub = _groups(depth - 1)
        kinds += [st.tuples(st.just("opt"), sub), st.tuples(st.just("union"), sub, sub)]
    element = st.one_of(kinds)
    return st.builds(lambda els: ("group", els),
                     st.lists(element, min_size=1, max_size=3))


queries = _groups(2)


def _term(x):
    return x if isinstance(x, str) else x.n3()


def render_expr(e):
    tag = e[0]
    if tag == "bound":
        return f"BOUND({e[1]})"
    if tag == "not":
        return f"!({render_expr(e[1])})"
    if tag in ("and", "or"):
        op = "&&" if tag == "and" else "||"
        return f"({render_expr(e[1])} {op} {render_expr(e[2])})"
    return f"({_term(e[1])} {tag} {_term(e[2])})"


def render_group(group):
    parts = []
    for el in group[1]:
        if el[0] == "tp":
            parts.append(" ".join(_term(x) for x in el[1:]) + " .")
        elif el[0] == "filter":
            parts.append(f"FILTER ({render_expr(el[1])})")
        elif el[0] == "opt":
            parts.append("OPTIONAL " + render_group(el[1]))
        else:
            parts.append(render_group(el[1]) + " UNION " + render_group(el[2]))
    return "{ " + " ".join(parts) + " }"


def render_query(group, header=None):
    head = " ".join("?" + h for h in header) if header else "*"
    return f"SELECT {head} WHERE {render_group(group)}"
