"""Fundamental group of a projective link complement and torsion searches.

Presentation conventions (loops compose left to right, base point above
the diagram):

* one Wirtinger generator per overarc, i.e. per maximal strand piece that
  is cut only at under-crossings and at the wall, one per free circle,
  and the wall generator ``h``;
* a crossing with sign ``s`` gives ``u_out = o^e u_in o^-e`` where
  ``e = s * CROSSING_TWIST``;
* with ``l_k`` the meridian of the strand at endpoint ``k`` oriented out
  of the disk (``mu^+1`` for a head, ``mu^-1`` for a tail) and
  ``L_k = l_0 ... l_(k-1)``, every endpoint ``j`` with antipode ``j'``
  gives ``h l_j h^-1 = L_j' l_j'^-1 L_j'^-1``;
* finally ``h^2 = l_0 ... l_(n-1)``, which is the relator ``h^2`` when
  the diagram misses the wall.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from rp3links.diagram import ProjectiveDiagram

Letter = tuple[str, int]
Word = tuple[Letter, ...]

WALL_GENERATOR = "h"
CROSSING_TWIST = 1
DEFAULT_MAX_DEGREE = 7


# ----------------------------------------------------------------------
# words


def reduce_word(word) -> Word:
    out: list[Letter] = []
    for g, e in word:
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


def invert(word) -> Word:
    return tuple((g, -e) for g, e in reversed(word))


def power(g: str, k: int) -> Word:
    return tuple((g, 1 if k > 0 else -1) for _ in range(abs(k)))


def word_str(word) -> str:
    if not word:
        return "1"
    return " ".join(g if e == 1 else f"{g}^-1" for g, e in word)


def word_to_json(word) -> list:
    return [[g, e] for g, e in word]


def word_from_json(data) -> Word:
    return tuple((str(g), int(e)) for g, e in data)


@dataclass(frozen=True)
class GroupPresentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...]

    def __post_init__(self):
        known = set(self.generators)
        for r in self.relators:
            for g, e in r:
                if g not in known or e not in (1, -1):
                    raise ValueError(f"relator letter {(g, e)} is not a generator letter")

    def to_json(self) -> dict:
        return {
            "generators": list(self.generators),
            "relators": [word_to_json(r) for r in self.relators],
        }

    @classmethod
    def from_json(cls, data) -> "GroupPresentation":
        return cls(tuple(data["generators"]), tuple(word_from_json(r) for r in data["relators"]))

    def __str__(self) -> str:
        rels = ", ".join(word_str(r) for r in self.relators)
        return f"< {', '.join(self.generators)} | {rels} >"


# ----------------------------------------------------------------------
# presentations from diagrams


def overarc_generators(d: ProjectiveDiagram) -> dict[str, str]:
    """Map every arc label to the generator of the overarc containing it."""
    parent = {a: a for a in d.arcs}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for c in d.crossings:
        ra, rb = find(c.slots[1]), find(c.slots[3])
        if ra != rb:
            parent[ra] = rb
    names: dict[str, str] = {}
    out = {}
    for a in d.arcs:
        root = find(a)
        if root not in names:
            names[root] = f"x{len(names) + 1}"
        out[a] = names[root]
    return out


def _circle_generators(d: ProjectiveDiagram, start: int) -> dict[str, str]:
    return {c: f"x{start + k}" for k, c in enumerate(d.free_circles, start=1)}


def _crossing_relators(d: ProjectiveDiagram, gen: dict[str, str]) -> list[Word]:
    rels = []
    for c in d.crossings:
        e = d.signs[c.id] * CROSSING_TWIST
        o, u_in, u_out = gen[c.slots[1]], gen[c.slots[0]], gen[c.slots[2]]
        rels.append(reduce_word(power(o, e) + ((u_in, 1),) + power(o, -e) + ((u_out, -1),)))
    return rels


def classical_presentation(d: ProjectiveDiagram) -> GroupPresentation:
    """Wirtinger presentation of a wall-free diagram viewed in R^3."""
    if d.boundary_count:
        raise ValueError("classical presentations need a wall-free diagram")
    gen = overarc_generators(d)
    circles = _circle_generators(d, len(set(gen.values())))
    gens = tuple(sorted(set(gen.values()), key=lambda g: int(g[1:]))) + tuple(circles.values())
    return GroupPresentation(gens, tuple(_crossing_relators(d, gen)))


def fundamental_group_presentation(d: ProjectiveDiagram) -> GroupPresentation:
    gen = overarc_generators(d)
    circles = _circle_generators(d, len(set(gen.values())))
    gens = tuple(sorted(set(gen.values()), key=lambda g: int(g[1:])))
    gens += tuple(circles.values()) + (WALL_GENERATOR,)
    rels = _crossing_relators(d, gen)
    m, n = d.boundary_count, d.n
    loops = []
    for j in range(m):
        w = d.wall_map[j]
        loops.append(((gen[w.arc], 1 if w.role == "head" else -1),))
    h = ((WALL_GENERATOR, 1),)
    for j in range(m):
        k = (j + n) % m
        prefix = tuple(x for loop in loops[:k] for x in loop)
        lhs = h + loops[j] + invert(h)
        rhs = prefix + invert(loops[k]) + invert(prefix)
        rels.append(reduce_word(lhs + invert(rhs)))
    half = tuple(x for loop in loops[:n] for x in loop)
    rels.append(reduce_word(h + h + invert(half)))
    return GroupPresentation(gens, tuple(r for r in rels if r))


# ----------------------------------------------------------------------
# abelianization


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(matrix):
    """Return ``(diagonal, U, V)`` with ``U * M * V`` diagonal.

    The diagonal lists ``min(rows, cols)`` entries, nonnegative, each
    dividing the next, zeros last.
    """
    a = [list(map(int, row)) for row in matrix]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    u, v = _identity(rows), _identity(cols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for m in (a, v):
            for row in m:
                row[i], row[j] = row[j], row[i]

    def add_row(src, dst, k):  # row dst += k * row src
        for m in (a, u):
            m[dst] = [x + k * y for x, y in zip(m[dst], m[src])]

    def add_col(src, dst, k):
        for m in (a, v):
            for row in m:
                row[dst] += k * row[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    while t < min(rows, cols):
        nonzero = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
        if not nonzero:
            break
        _, i, j = min(nonzero)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = a[t][t]
            bad_row = next((i for i in range(t + 1, rows) if a[i][t] % p), None)
            if bad_row is not None:
                add_row(t, bad_row, -(a[bad_row][t] // p))
                swap_rows(t, bad_row)
                continue
            bad_col = next((j for j in range(t + 1, cols) if a[t][j] % p), None)
            if bad_col is not None:
                add_col(t, bad_col, -(a[t][bad_col] // p))
                swap_cols(t, bad_col)
                continue
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(t, i, -(a[i][t] // p))
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(t, j, -(a[t][j] // p))
            stray = next(
                ((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % p),
                None,
            )
            if stray is None:
                break
            add_row(stray[0], t, 1)
        if a[t][t] < 0:
            negate_row(t)
        t += 1
    diag = [a[i][i] for i in range(min(rows, cols))]
    return diag, u, v


@dataclass(frozen=True)
class AbelianInvariants:
    rank: int
    torsion: tuple[int, ...]

    def to_json(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}

    def __str__(self) -> str:
        parts = ["Z"] * self.rank + [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


def relation_matrix(p: GroupPresentation) -> list[list[int]]:
    index = {g: k for k, g in enumerate(p.generators)}
    rows = []
    for r in p.relators:
        row = [0] * len(p.generators)
        for g, e in r:
            row[index[g]] += e
        rows.append(row)
    return rows


def abelianization(p: GroupPresentation) -> AbelianInvariants:
    rows = relation_matrix(p)
    if not rows:
        return AbelianInvariants(len(p.generators), ())
    diag, _u, _v = smith_normal_form(rows)
    nonzero = [x for x in diag if x]
    return AbelianInvariants(len(p.generators) - len(nonzero), tuple(x for x in nonzero if x > 1))


def _abelian_order_test(p: GroupPresentation):
    """Predicate: does the abelian image of a word have order dividing 2?"""
    rows = relation_matrix(p)
    index = {g: k for k, g in enumerate(p.generators)}
    if rows:
        diag, _u, v = smith_normal_form(rows)
    else:
        diag, v = [], _identity(len(p.generators))

    def test(word) -> bool:
        vec = [0] * len(p.generators)
        for g, e in word:
            vec[index[g]] += e
        for j in range(len(vec)):
            c = sum(vec[i] * v[i][j] for i in range(len(vec)))
            dj = diag[j] if j < len(diag) else 0
            if dj == 0 and c:
                return False
            if dj and (2 * c) % dj:
                return False
        return True

    return test


# ----------------------------------------------------------------------
# permutation quotients

Perm = tuple[int, ...]


def _compose(p: Perm, q: Perm) -> Perm:
    """``p`` then ``q``."""
    return tuple(q[i] for i in p)


def _inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def evaluate(word, images: dict[str, Perm], degree: int) -> Perm:
    acc = tuple(range(degree))
    for g, e in word:
        acc = _compose(acc, images[g] if e == 1 else _inverse(images[g]))
    return acc


def _class_representatives(n: int) -> list[Perm]:
    reps = []

    def partitions(k, largest):
        if k == 0:
            yield ()
            return
        for part in range(min(k, largest), 0, -1):
            for rest in partitions(k - part, part):
                yield (part,) + rest

    for shape in partitions(n, n):
        perm = list(range(n))
        start = 0
        for size in shape:
            for i in range(size):
                perm[start + i] = start + (i + 1) % size
            start += size
        reps.append(tuple(perm))
    return reps


def _canonical_action(images: dict[str, Perm], order: list[str], degree: int):
    """Isomorphism-class key of the permutation action (conjugacy in S_N)."""
    seen = [False] * degree
    orbits = []
    for s in range(degree):
        if seen[s]:
            continue
        orbit, frontier = {s}, [s]
        while frontier:
            x = frontier.pop()
            for g in order:
                for y in (images[g][x], _inverse(images[g])[x]):
                    if y not in orbit:
                        orbit.add(y)
                        frontier.append(y)
        for x in orbit:
            seen[x] = True
        best = None
        for base in sorted(orbit):
            label = {base: 0}
            queue = [base]
            for x in queue:
                for g in order:
                    y = images[g][x]
                    if y not in label:
                        label[y] = len(label)
                        queue.append(y)
            ordered = sorted(label, key=label.get)
            code = tuple(label[images[g][x]] for g in order for x in ordered)
            if best is None or code < best:
                best = code
        orbits.append((len(orbit), best))
    return tuple(sorted(orbits))


@dataclass(frozen=True)
class PermutationRepresentation:
    degree: int
    images: dict

    def image(self, word) -> Perm:
        return evaluate(word, self.images, self.degree)

    def to_json(self) -> dict:
        return {"degree": self.degree, "images": {g: list(p) for g, p in self.images.items()}}

    @classmethod
    def from_json(cls, data) -> "PermutationRepresentation":
        return cls(int(data["degree"]), {g: tuple(p) for g, p in data["images"].items()})


@dataclass
class QuotientSearch:
    representations: list[PermutationRepresentation] = field(default_factory=list)
    complete: bool = True
    nodes: int = 0


def _solve_propagate(p, images, degree):
    """Assign generators forced by relators; False on a contradiction."""
    changed = True
    while changed:
        changed = False
        for r in p.relators:
            missing = {g for g, _e in r if g not in images}
            if not missing:
                if evaluate(r, images, degree) != tuple(range(degree)):
                    return False
                continue
            if len(missing) != 1:
                continue
            (g,) = missing
            spots = [i for i, (x, _e) in enumerate(r) if x == g]
            if len(spots) != 1:
                continue
            i = spots[0]
            before = evaluate(r[:i], images, degree)
            after = evaluate(r[i + 1:], images, degree)
            # before * g^e * after = 1
            val = _inverse(_compose(after, before))
            images[g] = val if r[i][1] == 1 else _inverse(val)
            changed = True
    return True


def _pick_branch(p, images, free):
    """The free generator that leaves the most relators with one unknown."""
    best, best_score = free[0], -1
    for g in free:
        score = 0
        for r in p.relators:
            missing = {x for x, _e in r if x not in images}
            if g in missing and len(missing) == 2:
                score += 1
        if score > best_score:
            best, best_score = g, score
    return best


def find_finite_quotients(
    p: GroupPresentation,
    max_degree: int,
    max_nodes: int = 200_000,
    degrees=None,
) -> QuotientSearch:
    """Homomorphisms to S_N for N = ``max_degree`` up to conjugation.

    ``degrees`` overrides the degree list (for example ``range(2, 6)``).
    """
    if max_degree > DEFAULT_MAX_DEGREE:
        raise ValueError(f"degree {max_degree} exceeds the cap {DEFAULT_MAX_DEGREE}")
    result = QuotientSearch()
    for degree in degrees if degrees is not None else (max_degree,):
        _search_degree(p, degree, max_nodes, result)
    return result


def _search_degree(p, degree, max_nodes, result):
    gens = list(p.generators)
    weight = {g: sum(1 for r in p.relators for x, _e in r if x == g) for g in gens}
    order = sorted(gens, key=lambda g: -weight[g])
    all_perms = list(itertools.permutations(range(degree)))
    reps = _class_representatives(degree)
    seen = set()

    def rec(images, first):
        if result.nodes >= max_nodes:
            result.complete = False
            return
        result.nodes += 1
        images = dict(images)
        if not _solve_propagate(p, images, degree):
            return
        free = [g for g in order if g not in images]
        if not free:
            key = _canonical_action(images, gens, degree)
            if key not in seen:
                seen.add(key)
                result.representations.append(
                    PermutationRepresentation(degree, {g: images[g] for g in gens})
                )
            return
        g = free[0] if first else _pick_branch(p, images, free)
        for perm in reps if first else all_perms:
            images[g] = perm
            rec(images, False)
            if not result.complete:
                return
        images.pop(g, None)

    rec({}, True)


def count_homomorphisms(p: GroupPresentation, degree: int, max_nodes: int = 500_000) -> int:
    """Number of homomorphisms to S_N (not up to conjugation)."""
    all_perms = list(itertools.permutations(range(degree)))
    count = 0
    nodes = 0

    def rec(images):
        nonlocal count, nodes
        nodes += 1
        if nodes > max_nodes:
            raise RuntimeError("homomorphism count exceeded the node budget")
        images = dict(images)
        if not _solve_propagate(p, images, degree):
            return
        free = [g for g in p.generators if g not in images]
        if not free:
            count += 1
            return
        g = _pick_branch(p, images, free)
        for perm in all_perms:
            images[g] = perm
            rec(images)

    rec({})
    return count


# ----------------------------------------------------------------------
# order-2 witnesses


@dataclass(frozen=True)
class ProofStep:
    """Insert ``relator`` (rotated by ``rotation``, optionally inverted) at ``position``."""

    position: int
    relator: int
    rotation: int
    inverted: bool

    def to_json(self) -> dict:
        return {
            "position": self.position,
            "relator": self.relator,
            "rotation": self.rotation,
            "inverted": self.inverted,
        }

    @classmethod
    def from_json(cls, data) -> "ProofStep":
        return cls(int(data["position"]), int(data["relator"]), int(data["rotation"]), bool(data["inverted"]))


@dataclass(frozen=True)
class Order2Certificate:
    witness: Word
    square_proof: tuple[ProofStep, ...]
    quotient: PermutationRepresentation

    def to_json(self) -> dict:
        return {
            "type": "order2",
            "witness": word_to_json(self.witness),
            "square_proof": [s.to_json() for s in self.square_proof],
            "quotient": self.quotient.to_json(),
        }

    @classmethod
    def from_json(cls, data) -> "Order2Certificate":
        return cls(
            word_from_json(data["witness"]),
            tuple(ProofStep.from_json(s) for s in data["square_proof"]),
            PermutationRepresentation.from_json(data["quotient"]),
        )


def _relator_variant(p, index, rotation, inverted) -> Word:
    r = p.relators[index]
    r = r[rotation:] + r[:rotation]
    return invert(r) if inverted else r


def _prove_trivial(p: GroupPresentation, word: Word, max_nodes: int, max_len: int):
    """Best-first search for relator insertions reducing ``word`` to 1.

    Only insertions that cancel against a neighbouring letter are tried.
    """
    import heapq

    by_first: dict[Letter, list] = {}
    by_last: dict[Letter, list] = {}
    for i, r in enumerate(p.relators):
        for rot in range(len(r)):
            for inv in (False, True):
                piece = _relator_variant(p, i, rot, inv)
                entry = (i, rot, inv, piece)
                by_first.setdefault(piece[0], []).append(entry)
                by_last.setdefault(piece[-1], []).append(entry)
    start = reduce_word(word)
    heap = [(len(start), 0, start, ())]
    seen = {start}
    tick = 0
    while heap and tick < max_nodes:
        _l, _t, cur, path = heapq.heappop(heap)
        if not cur:
            return path
        for pos in range(len(cur) + 1):
            options = []
            if pos < len(cur):
                g, e = cur[pos]
                options += by_first.get((g, -e), [])
            if pos > 0:
                g, e = cur[pos - 1]
                options += by_last.get((g, -e), [])
            for i, rot, inv, piece in options:
                nxt = reduce_word(cur[:pos] + piece + cur[pos:])
                if nxt in seen or len(nxt) > max_len:
                    continue
                seen.add(nxt)
                tick += 1
                step = ProofStep(pos, i, rot, inv)
                if not nxt:
                    return path + (step,)
                heapq.heappush(heap, (len(nxt), tick, nxt, path + (step,)))
    return None


def candidate_words(p: GroupPresentation, max_len: int):
    """Words in length order, wall-generator conjugates first at each length."""
    h = WALL_GENERATOR if WALL_GENERATOR in p.generators else None
    letters = [(g, e) for g in p.generators for e in (1, -1)]
    seen = set()
    for length in range(1, max_len + 1):
        batch = []
        if h is not None:
            for k in range(0, (length - 1) // 2 + 1):
                if 2 * k + 1 != length:
                    continue
                for conj in itertools.product(letters, repeat=k):
                    w = reduce_word(conj + ((h, 1),) + invert(conj))
                    if len(w) == length:
                        batch.append(w)
        for w in itertools.product(letters, repeat=length):
            w = tuple(w)
            if reduce_word(w) == w:
                batch.append(w)
        for w in batch:
            if w not in seen:
                seen.add(w)
                yield w


def find_order2_witness(
    p: GroupPresentation,
    max_word_len: int = 3,
    max_nodes: int = 20_000,
    max_degree: int = 4,
) -> Order2Certificate | None:
    quotients = []
    for degree in range(2, max_degree + 1):
        found = find_finite_quotients(p, degree, max_nodes=max_nodes)
        quotients += found.representations
    identity = {}
    abelian_ok = _abelian_order_test(p)
    for w in candidate_words(p, max_word_len):
        if not abelian_ok(w):
            continue
        # w^2 = 1 forces every image to square to the identity
        phi = None
        refuted = False
        for q in quotients:
            img = q.image(w)
            ident = identity.setdefault(q.degree, tuple(range(q.degree)))
            if _compose(img, img) != ident:
                refuted = True
                break
            if phi is None and img != ident:
                phi = q
        if refuted or phi is None:
            continue
        square = reduce_word(w + w)
        proof = _prove_trivial(p, square, max_nodes, max_len=len(square) + 12)
        if proof is not None:
            return Order2Certificate(w, proof, phi)
    return None
