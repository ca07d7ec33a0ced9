"""Symbolic Clifford unitaries as tableaux of Pauli images.

A tableau records, for each canonical generator X_{e_i} and Z-generator of
the group, the exact Pauli image under conjugation.  That data determines
the unitary up to global phase; two tableaux are equal exactly when the
unitaries agree up to phase.  Conjugation of an arbitrary Pauli
accumulates the generator images in a fixed order (ascending factor, X
block before Z block), which is consistent because all deviations land in
exactly tracked phases.
"""

from __future__ import annotations

from dataclasses import dataclass

from .elementary import automorphism_elementary_factors
from .errors import GroupMismatchError
from .forms import (Character, QuadraticForm, induced_hom, polarize)
from .groups import Group, GroupElement, HomMatrix, invert_automorphism, product_group
from .pauli import PauliOperator, PauliVector, beta
from .phases import Phase

__all__ = [
    "AutomorphismGate", "QuadraticGate", "FourierGate", "PauliGate", "CXGate",
    "CliffordTableau", "gate_tableau", "gate_inverse", "sequence_tableau",
    "gate_automorphism", "gate_quadratic", "gate_fourier",
    "two_local_factorize",
]


@dataclass(frozen=True)
class AutomorphismGate:
    tau: HomMatrix

    @property
    def group(self) -> Group:
        return self.tau.source


@dataclass(frozen=True)
class QuadraticGate:
    form: QuadraticForm

    @property
    def group(self) -> Group:
        return self.form.group


@dataclass(frozen=True)
class FourierGate:
    """Fourier transform parameterized by an isomorphism from characters to
    elements, given as an automorphism-shaped matrix under the canonical
    identification."""

    matrix: HomMatrix
    dagger: bool = False

    @property
    def group(self) -> Group:
        return self.matrix.source

    @classmethod
    def canonical(cls, group: Group, dagger: bool = False) -> "FourierGate":
        return cls(HomMatrix.identity(group), dagger)


@dataclass(frozen=True)
class PauliGate:
    op: PauliOperator

    @property
    def group(self) -> Group:
        return self.op.group


@dataclass(frozen=True)
class CXGate:
    """Controlled shift |g, h> -> |g, g + h> on two qudits over one base
    group (dagger: |g, h> -> |g, h - g>)."""

    dagger: bool = False

    @property
    def group(self):
        return None  # resolved against the two slots it is applied to


Gate = AutomorphismGate | QuadraticGate | FourierGate | PauliGate | CXGate


def fourier_plain_inverse(matrix: HomMatrix) -> HomMatrix:
    """The iso matrix m' = -dual(m) with F_{m'} == F_m^dagger exactly."""
    entries = tuple(tuple(-v for v in row) for row in matrix.dual().entries)
    return HomMatrix(matrix.source, matrix.target, entries)


def gate_inverse(gate: Gate) -> Gate:
    if isinstance(gate, AutomorphismGate):
        return AutomorphismGate(invert_automorphism(gate.tau))
    if isinstance(gate, QuadraticGate):
        return QuadraticGate(-gate.form)
    if isinstance(gate, FourierGate):
        if gate.dagger:
            return FourierGate(gate.matrix, False)
        return FourierGate(fourier_plain_inverse(gate.matrix), False)
    if isinstance(gate, PauliGate):
        return PauliGate(gate.op.inverse())
    if isinstance(gate, CXGate):
        return CXGate(not gate.dagger)
    raise TypeError(f"unknown gate {gate!r}")


@dataclass(frozen=True)
class CliffordTableau:
    group: Group
    x_images: tuple[PauliOperator, ...]
    z_images: tuple[PauliOperator, ...]

    @classmethod
    def identity(cls, group: Group) -> "CliffordTableau":
        xs = tuple(PauliOperator.x_shift(group.generator(i))
                   for i in range(group.num_factors))
        zs = tuple(PauliOperator.z_char(Character.generator(group, i))
                   for i in range(group.num_factors))
        return cls(group, xs, zs)

    def conjugate(self, p: PauliOperator) -> PauliOperator:
        if p.group != self.group:
            raise GroupMismatchError("operator over a different group")
        out = PauliOperator.identity(self.group).with_phase(p.phase)
        for i, e in enumerate(p.x.residues):
            if e:
                out = out * self.x_images[i].pow(e)
        for i, e in enumerate(p.z.residues):
            if e:
                out = out * self.z_images[i].pow(e)
        return out

    def compose(self, first: "CliffordTableau") -> "CliffordTableau":
        """Tableau of U_self . U_first (``first`` acts first)."""
        if first.group != self.group:
            raise GroupMismatchError("tableaux over different groups")
        xs = tuple(self.conjugate(img) for img in first.x_images)
        zs = tuple(self.conjugate(img) for img in first.z_images)
        return CliffordTableau(self.group, xs, zs)

    def vector_matrix(self) -> HomMatrix:
        """The induced automorphism of G x G^ on Pauli vectors."""
        big = doubled_group(self.group)
        cols = [img.vector().residues() for img in self.x_images]
        cols += [img.vector().residues() for img in self.z_images]
        entries = tuple(tuple(cols[j][i] for j in range(len(cols)))
                        for i in range(2 * self.group.num_factors))
        return HomMatrix(big, big, entries)

    def inverse(self) -> "CliffordTableau":
        vm = invert_automorphism(self.vector_matrix())
        n = self.group.num_factors
        gens = [PauliOperator.x_shift(self.group.generator(i)) for i in range(n)]
        gens += [PauliOperator.z_char(Character.generator(self.group, i))
                 for i in range(n)]

        def preimage(col: int) -> PauliOperator:
            vec = [vm.entries[r][col] for r in range(2 * n)]
            raw = PauliOperator(
                self.group, Phase(),
                GroupElement(self.group, tuple(vec[:n])),
                Character(self.group, tuple(vec[n:])))
            img = self.conjugate(raw)
            if img.vector() != gens[col].vector():
                raise ValueError("tableau vector action failed to invert")
            # img is the generator up to phase; cancel that phase.
            return raw.times_phase(-img.phase)

        xs = tuple(preimage(i) for i in range(n))
        zs = tuple(preimage(n + i) for i in range(n))
        return CliffordTableau(self.group, xs, zs)

    def is_identity(self) -> bool:
        return self == CliffordTableau.identity(self.group)

    def validate(self) -> None:
        """Check the defining invariants: the vector action preserves the
        commutation pairing and each generator image has the right order."""
        n = self.group.num_factors
        gens = [PauliVector(self.group, self.group.generator(i),
                            Character.trivial(self.group)) for i in range(n)]
        gens += [PauliVector(self.group, self.group.zero(),
                             Character.generator(self.group, i)) for i in range(n)]
        imgs = [img.vector() for img in self.x_images]
        imgs += [img.vector() for img in self.z_images]
        for a in range(2 * n):
            for b in range(2 * n):
                if beta(imgs[a], imgs[b]) != beta(gens[a], gens[b]):
                    raise ValueError("tableau does not preserve the pairing")
        for i in range(n):
            q = self.group.orders[i]
            if not self.x_images[i].pow(q).is_identity():
                raise ValueError(f"X image {i} does not have order dividing {q}")
            if not self.z_images[i].pow(q).is_identity():
                raise ValueError(f"Z image {i} does not have order dividing {q}")


def doubled_group(group: Group) -> Group:
    return Group(group.orders + group.orders)


def gate_automorphism(tau: HomMatrix) -> CliffordTableau:
    group = tau.source
    inv_dual = invert_automorphism(tau).dual()
    xs = tuple(PauliOperator.x_shift(tau.column(i))
               for i in range(group.num_factors))
    zs = tuple(PauliOperator.z_char(Character(group, inv_dual.column(i).residues))
               for i in range(group.num_factors))
    return CliffordTableau(group, xs, zs)


def gate_quadratic(form: QuadraticForm) -> CliffordTableau:
    group = form.group
    bmat = induced_hom(polarize(form))
    xs = []
    for i in range(group.num_factors):
        g = group.generator(i)
        xs.append(PauliOperator(group, form.eval(g), g,
                                Character(group, bmat.column(i).residues)))
    zs = tuple(PauliOperator.z_char(Character.generator(group, i))
               for i in range(group.num_factors))
    return CliffordTableau(group, tuple(xs), zs)


def gate_fourier(matrix: HomMatrix, dagger: bool = False) -> CliffordTableau:
    """Tableau of the Fourier gate with iso matrix ``matrix``:
    X_g -> Z over -dual(m^{-1}) g and Z_chi -> X over m chi."""
    if dagger:
        return gate_fourier(fourier_plain_inverse(matrix))
    group = matrix.source
    inv_dual = invert_automorphism(matrix).dual()
    xs = tuple(PauliOperator.z_char(
        Character(group, tuple(-v for v in inv_dual.column(i).residues)))
        for i in range(group.num_factors))
    zs = tuple(PauliOperator.x_shift(matrix.column(i))
               for i in range(group.num_factors))
    return CliffordTableau(group, xs, zs)


def gate_pauli(op: PauliOperator) -> CliffordTableau:
    group = op.group
    inv = op.inverse()
    xs = tuple(op * PauliOperator.x_shift(group.generator(i)) * inv
               for i in range(group.num_factors))
    zs = tuple(op * PauliOperator.z_char(Character.generator(group, i)) * inv
               for i in range(group.num_factors))
    return CliffordTableau(group, xs, zs)


def cx_matrix(base: Group, dagger: bool = False) -> HomMatrix:
    """Automorphism matrix of the controlled shift on base x base."""
    big = product_group(base, 2)
    k = base.num_factors
    n = 2 * k
    entries = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for i in range(k):
        entries[k + i][i] = -1 % big.orders[k + i] if dagger else 1
    return HomMatrix(big, big, tuple(tuple(r) for r in entries))


def gate_tableau(gate: Gate, group: Group | None = None) -> CliffordTableau:
    if isinstance(gate, AutomorphismGate):
        return gate_automorphism(gate.tau)
    if isinstance(gate, QuadraticGate):
        return gate_quadratic(gate.form)
    if isinstance(gate, FourierGate):
        return gate_fourier(gate.matrix, gate.dagger)
    if isinstance(gate, PauliGate):
        return gate_pauli(gate.op)
    if isinstance(gate, CXGate):
        if group is None:
            raise ValueError("CX tableau needs the two-slot group")
        k = group.num_factors // 2
        base = Group(group.orders[:k])
        return gate_automorphism(cx_matrix(base, gate.dagger))
    raise TypeError(f"unknown gate {gate!r}")


def sequence_tableau(gates, group: Group) -> CliffordTableau:
    """Tableau of a gate list applied first-to-last."""
    out = CliffordTableau.identity(group)
    for gate in gates:
        out = gate_tableau(gate, group).compose(out)
    return out


def two_local_factorize(tau: HomMatrix, base: Group, n: int) -> list[HomMatrix]:
    """Split an automorphism of base^n into automorphisms touching at most
    two slots; composing the returned list in order (first entry applied
    last) reproduces ``tau``.

    Elementary Gaussian moves each touch at most two cyclic factors, hence
    at most two slots; adjacent moves inside one slot pair are merged.
    """
    big = product_group(base, n)
    if tau.source != big or tau.target != big:
        raise GroupMismatchError("automorphism is not over the given base^n")
    k = base.num_factors

    def slots_of(hom: HomMatrix) -> set[int]:
        touched = set()
        for i in range(big.num_factors):
            for j in range(big.num_factors):
                if hom.entries[i][j] != (1 if i == j else 0):
                    touched.add(i // k)
                    touched.add(j // k)
        return touched

    merged: list[tuple[set[int], HomMatrix]] = []
    for factor in automorphism_elementary_factors(tau):
        fslots = slots_of(factor)
        if merged and len(merged[-1][0] | fslots) <= 2:
            slots, acc = merged.pop()
            merged.append((slots | fslots, acc.compose(factor)))
        else:
            merged.append((fslots, factor))
    return [hom for _, hom in merged]
