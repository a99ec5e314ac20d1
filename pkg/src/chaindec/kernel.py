"""Filtered kernels of simplicial epimorphisms that admit a section.

For a simplicial map f: K -> L with a section s (f or s given on vertices
and extended simplicially), the chains sigma - s(f(sigma)) over the
simplices sigma of K outside the image of s form a quasi-minimal generator
basis of ker f at every degree and filtration value.  Their boundary
matrix is K's boundary matrix with the rows and columns of the s-image
simplices struck out, so the kernel decomposes with the same machinery as
any filtered chain complex even though it is not the complex of a
simplicial complex itself.
"""

from __future__ import annotations

from dataclasses import dataclass

from .boundary import FilteredChainComplexInput, GeneratorLabel
from .decomposition import Decomposition, decompose
from .errors import ValidationError
from .field import PrimeField
from .rips import FilteredSimplicialComplex, Simplex


@dataclass(frozen=True)
class SimplicialMapWithSection:
    """Vertex maps f: K -> L and s: L -> K with f after s the identity."""

    vertex_map: dict[int, int]
    section: dict[int, int]


@dataclass(frozen=True)
class KernelGenerator:
    """One basis element sigma - s(f(sigma)) of the filtered kernel.

    ``chain`` lists (index into K's simplices, coefficient); it has two
    terms when f preserves the dimension of sigma and one when it collapses
    it (the image term is then zero).
    """

    source_index: int
    label: GeneratorLabel
    chain: tuple[tuple[int, int], ...]


def permutation_sign(values: list[int]) -> int:
    """Sign of the permutation sorting ``values`` (assumed distinct)."""
    sign = 1
    seq = list(values)
    for a in range(len(seq)):
        for b in range(a + 1, len(seq)):
            if seq[a] > seq[b]:
                sign = -sign
    return sign


def chain_map_of(
    vertex_map: dict[int, int], vertices: tuple[int, ...]
) -> tuple[tuple[int, ...], int] | None:
    """Chain-level image of one simplex under a vertex map.

    Returns the sorted image simplex together with the sign of the vertex
    reordering, or None when two vertices collide (the dimension drops and
    the chain image is zero).
    """
    try:
        images = [vertex_map[v] for v in vertices]
    except KeyError as missing:
        raise ValidationError(f"vertex {missing.args[0]} has no image") from None
    if len(set(images)) != len(images):
        return None
    return tuple(sorted(images)), permutation_sign(images)


def validate_map(
    domain: FilteredSimplicialComplex,
    codomain: FilteredSimplicialComplex,
    maps: SimplicialMapWithSection,
) -> None:
    """Check everything the kernel construction relies on.

    f must be simplicial and entrance-decreasing on every simplex of K; s
    must be a genuine section (f s = id on vertices) whose simplicial
    extension lands in K preserving degree and entrance; f must hit every
    simplex of L.  Violations raise ValidationError naming the culprit.
    """
    f, s = maps.vertex_map, maps.section
    domain_vertices = domain.vertex_set()
    codomain_vertices = codomain.vertex_set()
    for v in domain_vertices:
        if v not in f:
            raise ValidationError(f"domain vertex {v} is not mapped")
        if f[v] not in codomain_vertices:
            raise ValidationError(f"f({v}) = {f[v]} is not a codomain vertex")
    for w in codomain_vertices:
        if w not in s:
            raise ValidationError(f"codomain vertex {w} has no section value")
        if s[w] not in domain_vertices:
            raise ValidationError(f"s({w}) = {s[w]} is not a domain vertex")
        if f.get(s[w]) != w:
            raise ValidationError(f"s is not a section at vertex {w}: f(s({w})) = {f.get(s[w])}")
    for sigma in domain:
        image = chain_map_of(f, sigma.vertices)
        image_vertices = (
            tuple(sorted(set(f[v] for v in sigma.vertices))) if image is None else image[0]
        )
        if image_vertices not in codomain.index:
            raise ValidationError(
                f"f is not simplicial: image {image_vertices} of {sigma.vertices} "
                "is not a codomain simplex"
            )
        if codomain.entrance_of(image_vertices) > sigma.entrance:
            raise ValidationError(
                f"entrance violation: f({sigma.vertices}) enters at "
                f"{codomain.entrance_of(image_vertices)}, after its preimage at {sigma.entrance}"
            )
    for tau in codomain:
        lifted = tuple(sorted(s[w] for w in tau.vertices))
        if len(set(lifted)) != len(tau.vertices):
            raise ValidationError(f"section collapses the simplex {tau.vertices}")
        if lifted not in domain.index:
            raise ValidationError(
                f"section is not simplicial: s({tau.vertices}) = {lifted} is not in the domain"
            )
        if domain.entrance_of(lifted) != tau.entrance:
            raise ValidationError(
                f"section entrance mismatch on {tau.vertices}: "
                f"{domain.entrance_of(lifted)} != {tau.entrance}"
            )
        # Surjectivity on simplices is automatic given the section; keep the
        # explicit check so a future relaxation cannot silently break it.
        image = chain_map_of(f, lifted)
        if image is None or image[0] != tau.vertices:
            raise ValidationError(f"f(s({tau.vertices})) != {tau.vertices}")


def section_image(
    codomain: FilteredSimplicialComplex, maps: SimplicialMapWithSection
) -> set[tuple[int, ...]]:
    return {
        tuple(sorted(maps.section[w] for w in tau.vertices)) for tau in codomain
    }


def kernel_generators(
    domain: FilteredSimplicialComplex,
    codomain: FilteredSimplicialComplex,
    maps: SimplicialMapWithSection,
) -> list[KernelGenerator]:
    """Quasi-minimal generators of ker f: one per domain simplex outside Im(s).

    Each generator keeps the label (degree, entrance) of its source simplex,
    so for every degree n and time t the generators with degree n and
    entrance <= t count exactly dim K_n^t - dim L_n^t.
    """
    validate_map(domain, codomain, maps)
    in_image = section_image(codomain, maps)
    generators: list[KernelGenerator] = []
    for position, sigma in enumerate(domain):
        if sigma.vertices in in_image:
            continue
        chain: list[tuple[int, int]] = [(position, 1)]
        image = chain_map_of(maps.vertex_map, sigma.vertices)
        if image is not None:
            image_vertices, f_sign = image
            lifted = chain_map_of(maps.section, image_vertices)
            assert lifted is not None  # the section never collapses (validated)
            lifted_vertices, s_sign = lifted
            chain.append((domain.index[lifted_vertices], -f_sign * s_sign))
        generators.append(
            KernelGenerator(
                source_index=position,
                label=GeneratorLabel(sigma.dimension, sigma.entrance),
                chain=tuple(chain),
            )
        )
    return generators


def kernel_boundary(
    domain: FilteredSimplicialComplex,
    maps: SimplicialMapWithSection,
    generators: list[KernelGenerator],
) -> FilteredChainComplexInput:
    """Boundary matrix of ker f in the sigma - s(f(sigma)) basis.

    The boundary of sigma - s(f(sigma)) expands to the same alternating sum
    as the boundary of sigma with every face replaced by its kernel
    generator; faces inside Im(s) contribute zero.  So the matrix is K's
    boundary matrix with the Im(s) rows and columns removed, coefficients
    untouched.
    """
    row_of_source = {g.source_index: row for row, g in enumerate(generators)}
    labels = tuple(g.label for g in generators)
    columns = []
    for g in generators:
        sigma = domain.simplices[g.source_index]
        column = []
        if sigma.dimension > 0:
            for k, face in enumerate(sigma.faces()):
                face_row = row_of_source.get(domain.index[face])
                if face_row is not None:
                    column.append((face_row, -1 if k % 2 else 1))
        columns.append(tuple(sorted(column)))
    return FilteredChainComplexInput(labels, tuple(columns))


def decompose_kernel(
    domain: FilteredSimplicialComplex,
    codomain: FilteredSimplicialComplex,
    maps: SimplicialMapWithSection,
    field: PrimeField,
    strategy: str = "entrance",
    trace: bool = False,
) -> Decomposition:
    """Decompose the filtered kernel of f into interval spheres."""
    generators = kernel_generators(domain, codomain, maps)
    boundary = kernel_boundary(domain, maps, generators)
    return decompose(boundary, field, strategy=strategy, trace=trace)


def collapse_example() -> tuple[
    FilteredSimplicialComplex, FilteredSimplicialComplex, SimplicialMapWithSection
]:
    """Smallest interesting instance: an edge collapsed onto a point.

    K = {a, b, ab} with the edge entering at 1, L a single vertex, f
    constant, s picking a.  The kernel has generators b - a and ab, and
    decomposes into one interval sphere I^0[0, 1].
    """
    domain = FilteredSimplicialComplex(
        [Simplex((0,), 0.0), Simplex((1,), 0.0), Simplex((0, 1), 1.0)]
    )
    codomain = FilteredSimplicialComplex([Simplex((0,), 0.0)])
    maps = SimplicialMapWithSection(vertex_map={0: 0, 1: 0}, section={0: 0})
    return domain, codomain, maps
