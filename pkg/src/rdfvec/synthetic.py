"""Synthetic benchmark graphs for the evaluation harness.

Small generators that wire entities of a few classes (cities,
countries, people, ...) through role-bearing predicates, so that an
embedding's grasp of *position* — e.g. being the subject vs. the
object of `leader` — is measurable with clustering and analogy tasks.
"""

from __future__ import annotations

import numpy as np

from .graph import Triple

_NS = "http://example.org/"


def _iri(kind: str, i: int) -> str:
    return f"{_NS}{kind}{i}"


def role_graph(
    n_per_class: int = 20, seed: int = 0
) -> tuple[list[Triple], dict[str, str]]:
    """Cities, countries and people in fixed structural roles.

    Every city sits in a country and has a person as leader; every
    country has a person as leader; every person was born in one city
    and resides in another. Returns the triples and the entity -> class
    labels for clustering.
    """
    gen = np.random.default_rng(seed)
    n = n_per_class
    cities = [_iri("City_", i) for i in range(n)]
    countries = [_iri("Country_", i) for i in range(n)]
    people = [_iri("Person_", i) for i in range(n)]
    p_country = _NS + "country"
    p_leader = _NS + "leader"
    p_birth = _NS + "birthPlace"
    p_residence = _NS + "residence"

    mayors = gen.permutation(n)
    heads = gen.permutation(n)
    births = gen.permutation(n)
    homes = gen.permutation(n)

    triples = []
    for i in range(n):
        triples.append(Triple(cities[i], p_country, countries[i % n]))
        triples.append(Triple(cities[i], p_leader, people[int(mayors[i])]))
        triples.append(Triple(countries[i], p_leader, people[int(heads[i])]))
        triples.append(Triple(people[i], p_birth, cities[int(births[i])]))
        triples.append(Triple(people[i], p_residence, cities[int(homes[i])]))

    labels = {c: "city" for c in cities}
    labels.update({c: "country" for c in countries})
    labels.update({p: "person" for p in people})
    return triples, labels


def capital_graph(
    n_pairs: int = 20, n_distractors: int = 40, seed: int = 0
) -> tuple[list[Triple], list[tuple[str, str, str, str]]]:
    """Capital-country pairs plus distractor entities.

    Capitals and countries point at each other through capitalOf /
    hasCapital. The distractors (people and organisations) attach to
    one pair each, with both pair members pointing at the same person
    — walks need those convergent edges, otherwise the reciprocal
    capital<->country cycle is the only context either member ever
    sees of the other and the pair relation stays invisible to
    position-aware training. Returns the triples and all
    "capital_i : country_i :: capital_j : country_j" quadruples.
    """
    gen = np.random.default_rng(seed)
    capitals = [_iri("Capital_", i) for i in range(n_pairs)]
    countries = [_iri("Country_", i) for i in range(n_pairs)]
    p_capital_of = _NS + "capitalOf"
    p_has_capital = _NS + "hasCapital"
    p_birthplace_of = _NS + "birthplaceOf"
    p_citizenship_of = _NS + "citizenshipOf"
    p_works_at = _NS + "worksAt"
    p_based = _NS + "basedIn"
    p_market = _NS + "operatesIn"

    triples = []
    for i in range(n_pairs):
        triples.append(Triple(capitals[i], p_capital_of, countries[i]))
        triples.append(Triple(countries[i], p_has_capital, capitals[i]))

    half = n_distractors // 2
    people = [_iri("Person_", int(j)) for j in gen.permutation(half)]
    orgs = [_iri("Org_", int(j)) for j in gen.permutation(n_distractors - half)]
    for j, person in enumerate(people):
        i = j % n_pairs
        triples.append(Triple(capitals[i], p_birthplace_of, person))
        triples.append(Triple(countries[i], p_citizenship_of, person))
        if orgs:
            triples.append(Triple(person, p_works_at, orgs[j % len(orgs)]))
    for j, org in enumerate(orgs):
        i = j % n_pairs
        triples.append(Triple(org, p_based, capitals[i]))
        triples.append(Triple(org, p_market, countries[i]))

    quads = [
        (capitals[i], countries[i], capitals[j], countries[j])
        for i in range(n_pairs)
        for j in range(n_pairs)
        if i != j
    ]
    return triples, quads


def to_ntriples(triples: list[Triple]) -> str:
    """Render triples as N-Triples text."""
    out = []
    for t in triples:
        obj = f'"{t.object}"' if t.object_is_literal else _fmt(t.object)
        out.append(f"{_fmt(t.subject)} {_fmt(t.predicate)} {obj} .")
    return "\n".join(out) + "\n" if out else ""


def _fmt(term: str) -> str:
    return term if term.startswith("_:") else f"<{term}>"
