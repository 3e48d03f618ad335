"""Ground truth by brute force: homomorphism search, bipartiteness, and
exhaustive audits that enumerate a scheme's whole certificate space to
check the certification equivalence (a certificate accepted everywhere
exists iff the property holds).
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass

from .csp import CspInstance, CspParams, solve_csp
from .errors import InvalidParams, TooLarge
from .graphs import Graph, IdAssignment, TargetGraph, local_view
from .hashing import _fin, _mix_input, family_size
from .schemes import (
    Certificate,
    HashCertificate,
    SchemeParams,
    SchemeTag,
    encode_assignment_fields,
    encode_hash_certificate,
    verify_certificate,
)


def find_homomorphism(
    graph: Graph, target: TargetGraph, budget: int = 10**7
) -> tuple[int, ...] | None:
    """Lexicographically first homomorphism graph -> target, or None.

    Backtracks over vertices in index order, values ascending; raises
    TooLarge after `budget` visited search nodes, so satisfiable instances
    far beyond the worst-case bound still solve quickly.
    """
    n = graph.vertex_count
    assigned: list[int] = []
    visited = 0
    back_neighbors = [
        [u for u in graph.neighbors(v) if u < v] for v in range(n)
    ]

    def descend(v: int) -> bool:
        nonlocal visited
        if v == n:
            return True
        for value in range(target.vertex_count):
            visited += 1
            if visited > budget:
                raise TooLarge("homomorphism search budget exhausted")
            if all(target.has_edge(value, assigned[u]) for u in back_neighbors[v]):
                assigned.append(value)
                if descend(v + 1):
                    return True
                assigned.pop()
        return False

    if descend(0):
        return tuple(assigned)
    return None


def exists_homomorphism(graph: Graph, target: TargetGraph) -> bool:
    return find_homomorphism(graph, target) is not None


def is_bipartite(graph: Graph) -> bool:
    """Breadth-first 2-coloring per component; agrees with
    exists_homomorphism(graph, K2) by definition."""
    color = [-1] * graph.vertex_count
    for start in range(graph.vertex_count):
        if color[start] >= 0:
            continue
        color[start] = 0
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in graph.neighbors(u):
                if color[v] < 0:
                    color[v] = 1 - color[u]
                    queue.append(v)
                elif color[v] == color[u]:
                    return False
    return True


@dataclass(frozen=True)
class AuditBounds:
    """Enumeration limits: certificates may claim 1..max_claimed_n vertices,
    and the whole space must stay within max_space certificates."""

    max_claimed_n: int = 4
    max_space: int = 10**7

    def __post_init__(self):
        if self.max_claimed_n < 1 or self.max_space < 1:
            raise InvalidParams("bounds must be positive")


@dataclass(frozen=True)
class AuditReport:
    """Outcome of one exhaustive audit.

    certificates_tried counts enumerated certificates up to and including
    the first accepted one, so it equals the whole space exactly when
    nothing is accepted. witness is the first accepted certificate in
    canonical order (claimed n, then index, then entries ascending), or,
    when nothing is accepted, the identifier of the lowest-id rejecting
    node for the canonically first certificate (None for an empty space).
    """

    property_holds: bool
    certificate_accepted_exists: bool
    certificates_tried: int
    witness: Certificate | int | None


def _allowed_pairs(target: TargetGraph) -> frozenset[tuple[int, int]]:
    return frozenset(
        (a, b)
        for a in range(target.vertex_count)
        for b in range(target.vertex_count)
        if target.has_edge(a, b)
    )


def _hash_claim_plan(n_values: int, policy, multiplier, bounds: AuditBounds):
    """Valid (claim, id_range, buckets, family size) rows and the exact
    number of decodable certificates they contribute."""
    plan = []
    space = 0
    for claim in range(1, bounds.max_claimed_n + 1):
        try:
            id_range = policy.evaluate(claim)
        except InvalidParams:
            continue
        buckets = math.ceil(multiplier * claim)
        if buckets > id_range:
            continue
        size = family_size(buckets, id_range)
        plan.append((claim, id_range, buckets, size))
        space += size * n_values**buckets
    if space > bounds.max_space:
        raise TooLarge(f"certificate space {space} exceeds {bounds.max_space}")
    return plan, space


def _first_hash_witness(plan) -> HashCertificate | None:
    if not plan:
        return None
    claim, _, buckets, _ = plan[0]
    return HashCertificate(claim, 0, (0,) * buckets)


def audit_soundness(
    graph: Graph,
    ids: IdAssignment,
    scheme: SchemeTag,
    params: SchemeParams,
    bounds: AuditBounds = AuditBounds(),
) -> AuditReport:
    """Enumerate every decodable certificate of the scheme within bounds and
    report whether some certificate is accepted by every node."""
    property_holds = exists_homomorphism(graph, params.target)
    if scheme is SchemeTag.HASH:
        found, tried, first = _enumerate_hash(graph, ids, params, bounds)
    elif scheme is SchemeTag.IDLIST:
        found, tried, first = _enumerate_idlist(graph, ids, params, bounds)
    else:
        found, tried, first = _enumerate_bitmap(graph, ids, params, bounds)
    witness: Certificate | int | None
    if found is not None:
        witness = found
    elif first is None:
        witness = None
    else:
        witness = _smallest_rejecting_id(graph, ids, first, params)
    return AuditReport(property_holds, found is not None, tried, witness)


def _smallest_rejecting_id(graph, ids, cert: Certificate, params) -> int | None:
    rejecting = [
        ids.id_of(v)
        for v in range(graph.vertex_count)
        if not verify_certificate(
            local_view(graph, ids, v, cert.payload), cert.scheme, params
        )
    ]
    return min(rejecting) if rejecting else None


def _enumerate_hash(graph, ids, params: SchemeParams, bounds):
    n_values = params.target.vertex_count
    plan, _ = _hash_claim_plan(
        n_values, params.id_policy, params.range_multiplier, bounds
    )
    vertex_ids = [ids.id_of(v) for v in range(graph.vertex_count)]
    edges = sorted(graph.edges)
    allowed = _allowed_pairs(params.target)
    mixed = [_mix_input(i) for i in vertex_ids]
    tried = 0
    for claim, id_range, buckets, size in plan:
        entry_space = n_values**buckets
        if any(i >= id_range for i in vertex_ids):
            tried += size * entry_space  # every node rejects out-of-range ids
            continue
        entries = list(itertools.product(range(n_values), repeat=buckets))
        for index in range(size):
            salt = _fin(index)
            b = [_fin(m ^ salt) % buckets for m in mixed]
            pairs = [(b[u], b[v]) for u, v in edges]
            for li, colors in enumerate(entries):
                for x, y in pairs:
                    if (colors[x], colors[y]) not in allowed:
                        break
                else:
                    tried += li + 1
                    cert = encode_hash_certificate(
                        HashCertificate(claim, index, colors), params
                    )
                    return cert, tried, None
            tried += entry_space
    first = _first_hash_witness(plan)
    first_cert = encode_hash_certificate(first, params) if first else None
    return None, tried, first_cert


def _enumerate_idlist(graph, ids, params: SchemeParams, bounds):
    from .schemes import IdListCertificate, encode_idlist_certificate

    n_values = params.target.vertex_count
    policy = params.id_policy
    vertex_ids = frozenset(ids.ids)
    allowed = _allowed_pairs(params.target)
    # per identifier, the other endpoints it must be color-compatible with
    incident: dict[int, list[int]] = {}
    for u, v in graph.edges:
        incident.setdefault(ids.id_of(u), []).append(ids.id_of(v))
        incident.setdefault(ids.id_of(v), []).append(ids.id_of(u))

    plan = []
    space = 0
    for claim in range(1, bounds.max_claimed_n + 1):
        try:
            id_range = policy.evaluate(claim)
        except InvalidParams:
            continue
        record_width = (id_range - 1).bit_length() + params.value_width
        if record_width == 0 and claim > 1:
            continue  # the decoder rejects oversized zero-width claims
        plan.append((claim, id_range))
        space += (id_range * n_values) ** claim
    if space > bounds.max_space:
        raise TooLarge(f"certificate space {space} exceeds {bounds.max_space}")

    tried = 0
    first_cert = None
    for claim, id_range in plan:
        if first_cert is None:
            first_cert = encode_idlist_certificate(
                IdListCertificate(((0, 0),) * claim), params
            )
        block = [(id_range * n_values) ** r for r in range(claim + 1)]
        colors_of: dict[int, int] = {}
        records: list[tuple[int, int]] = []

        def descend(depth: int, prev_id: int):
            nonlocal tried
            # records with an identifier <= prev_id are unsorted: every
            # completion is rejected everywhere, so count them wholesale
            tried += (prev_id + 1) * n_values * block[claim - depth - 1]
            for identifier in range(prev_id + 1, id_range):
                partners = [
                    colors_of[w] for w in incident.get(identifier, ()) if w in colors_of
                ]
                for color in range(n_values):
                    if any((color, pc) not in allowed for pc in partners):
                        tried += block[claim - depth - 1]
                        continue
                    records.append((identifier, color))
                    colors_of[identifier] = color
                    if depth + 1 == claim:
                        tried += 1
                        if vertex_ids <= colors_of.keys():
                            cert = encode_idlist_certificate(
                                IdListCertificate(tuple(records)), params
                            )
                            records.pop()
                            del colors_of[identifier]
                            return cert
                    else:
                        cert = descend(depth + 1, identifier)
                        if cert is not None:
                            records.pop()
                            del colors_of[identifier]
                            return cert
                    records.pop()
                    del colors_of[identifier]
            return None

        cert = descend(0, -1)
        if cert is not None:
            return cert, tried, None
    return None, tried, first_cert


def _enumerate_bitmap(graph, ids, params: SchemeParams, bounds):
    from .bits import Bits, BitWriter

    n_values = params.target.vertex_count
    width = params.value_width
    vertex_ids = [ids.id_of(v) for v in range(graph.vertex_count)]
    edge_ids = [(ids.id_of(u), ids.id_of(v)) for u, v in sorted(graph.edges)]
    allowed = _allowed_pairs(params.target)

    ranges = []
    for claim in range(1, bounds.max_claimed_n + 1):
        try:
            id_range = params.id_policy.evaluate(claim)
        except InvalidParams:
            continue
        if id_range not in ranges:
            ranges.append(id_range)
    ranges.sort()

    if width == 0:
        # one empty payload; every node checks only that it has no neighbors
        if not ranges:
            return None, 0, None
        cert = Certificate(SchemeTag.BITMAP, Bits.empty())
        if not graph.edges:
            return cert, 1, None
        return None, 1, cert

    # n_values ** id_range overflows memory long before it compares small,
    # so bound the exponent first (n_values >= 2 here: width > 0)
    if any(id_range > bounds.max_space.bit_length() for id_range in ranges):
        raise TooLarge("bitmap space beyond enumerable bounds")
    space = sum(n_values**id_range for id_range in ranges)
    if space > bounds.max_space:
        raise TooLarge(f"certificate space {space} exceeds {bounds.max_space}")

    tried = 0
    first_cert = None

    def encode(colors: tuple[int, ...]) -> Certificate:
        w = BitWriter()
        for c in colors:
            w.write(c, width)
        return Certificate(SchemeTag.BITMAP, w.getvalue())

    for id_range in ranges:
        if first_cert is None:
            first_cert = encode((0,) * id_range)
        if any(i >= id_range for i in vertex_ids):
            tried += n_values**id_range
            continue
        for colors in itertools.product(range(n_values), repeat=id_range):
            tried += 1
            if all((colors[a], colors[b]) in allowed for a, b in edge_ids):
                return encode(colors), tried, None
    return None, tried, first_cert


def audit_csp_soundness(
    instance: CspInstance,
    params: CspParams,
    bounds: AuditBounds = AuditBounds(),
) -> AuditReport:
    """CSP analog of audit_soundness for the hash-compressed scheme: the
    certificate space is enumerated and checked against every variable's
    incident constraints."""
    property_holds = solve_csp(instance) is not None
    plan, _ = _hash_claim_plan(
        params.domain_size, params.id_policy, params.range_multiplier, bounds
    )
    variable_ids = [instance.ids.id_of(v) for v in range(instance.variable_count)]
    mixed = [_mix_input(i) for i in variable_ids]
    scopes = [
        tuple(instance.ids.id_of(v) for v in ct.scope) for ct in instance.constraints
    ]
    relations = [ct.relation for ct in instance.constraints]
    id_pos = {identifier: pos for pos, identifier in enumerate(variable_ids)}

    tried = 0
    found = None
    for claim, id_range, buckets, size in plan:
        entry_space = params.domain_size**buckets
        if any(i >= id_range for i in variable_ids):
            tried += size * entry_space
            continue
        entries = list(itertools.product(range(params.domain_size), repeat=buckets))
        for index in range(size):
            salt = _fin(index)
            b = [_fin(m ^ salt) % buckets for m in mixed]
            scope_buckets = [
                tuple(b[id_pos[i]] for i in scope) for scope in scopes
            ]
            for li, values in enumerate(entries):
                ok = True
                for sb, relation in zip(scope_buckets, relations):
                    if tuple(values[x] for x in sb) not in relation:
                        ok = False
                        break
                if ok:
                    tried += li + 1
                    payload = encode_assignment_fields(
                        claim, index, values, params.id_policy,
                        params.range_multiplier, params.domain_size,
                    )
                    found = Certificate(SchemeTag.HASH, payload)
                    break
            if found is not None:
                break
            tried += entry_space
        if found is not None:
            break

    witness: Certificate | int | None
    if found is not None:
        witness = found
    elif not plan:
        witness = None
    else:
        from .csp import csp_view, verify_csp_variable

        claim, _, buckets, _ = plan[0]
        payload = encode_assignment_fields(
            claim, 0, (0,) * buckets, params.id_policy, params.range_multiplier,
            params.domain_size,
        )
        rejecting = [
            instance.ids.id_of(v)
            for v in range(instance.variable_count)
            if not verify_csp_variable(csp_view(instance, v, payload), params)
        ]
        witness = min(rejecting) if rejecting else None
    return AuditReport(property_holds, found is not None, tried, witness)
