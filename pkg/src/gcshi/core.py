"""Domain types, validation and the bundled reference data.

All containers are frozen; matrix values are stored as read-only numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

RATING_MIN = 1
RATING_MAX = 10


class Kind(str, Enum):
    BENEFIT = "benefit"
    COST = "cost"


class Stage(str, Enum):
    CATEGORIZATION = "categorization"
    PRIORITIZATION = "prioritization"


class ValidationError(ValueError):
    """Raised when input data violates its invariants.

    ``violations`` holds every problem found, not just the first one.
    """

    def __init__(self, violations: Sequence[Violation] | Sequence[str]):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


@dataclass(frozen=True)
class Violation:
    row: str
    column: str
    rule: str

    def __str__(self) -> str:
        return f"({self.row}, {self.column}): {self.rule}"


@dataclass(frozen=True)
class Activity:
    code: str
    name: str
    description: str = ""

    def __post_init__(self):
        if not self.name:
            raise ValueError(f"activity {self.code!r} has an empty name")


@dataclass(frozen=True)
class Criterion:
    id: str
    name: str
    kind: Kind = Kind.BENEFIT
    stage: Stage = Stage.CATEGORIZATION


@dataclass(frozen=True)
class ExpertProfile:
    id: str
    profession: str
    education: str
    experience: int

    def __post_init__(self):
        if self.experience < 0:
            raise ValueError("experience must be non-negative")


@dataclass(frozen=True)
class Category:
    code: str
    name: str
    members: frozenset[str]

    def __post_init__(self):
        if not self.members:
            raise ValueError(f"category {self.code!r} has no members")


def _frozen_array(values, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    if arr.ndim == 1 and arr.size == 0:
        arr = arr.reshape(0, 0)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class _LabeledMatrix:
    rows: tuple[str, ...]
    columns: tuple[str, ...]
    values: np.ndarray

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.columns == other.columns
            and self.values.dtype == other.values.dtype
            and np.array_equal(self.values, other.values)
        )

    def __hash__(self):
        return hash((self.rows, self.columns, self.values.tobytes()))

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def row(self, code: str) -> np.ndarray:
        return self.values[self.rows.index(code)]

    def _check_shape(self):
        if self.values.ndim != 2:
            raise ValueError("matrix values must be two-dimensional")
        if self.values.shape != (len(self.rows), len(self.columns)):
            raise ValueError(
                f"values shape {self.values.shape} does not match "
                f"{len(self.rows)} rows x {len(self.columns)} columns"
            )
        for labels, what in ((self.rows, "row"), (self.columns, "column")):
            if len(set(labels)) != len(labels):
                raise ValueError(f"duplicate {what} labels")


@dataclass(frozen=True, eq=False)
class RatingMatrix(_LabeledMatrix):
    """Activities x categorization criteria, integer ratings on a 1-10 scale.

    Construction checks structure only. Range and integrality are checked by
    :func:`validate_rating_matrix` so that loaders can report every bad cell.
    """

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))
        object.__setattr__(self, "columns", tuple(self.columns))
        object.__setattr__(self, "values", _frozen_array(self.values, float if _has_fraction(self.values) else np.int64))
        self._check_shape()


def _has_fraction(values) -> bool:
    arr = np.asarray(values, dtype=float)
    return bool(arr.size) and not np.all(np.isfinite(arr) & (arr == np.round(arr)))


@dataclass(frozen=True, eq=False)
class DecisionMatrix(_LabeledMatrix):
    """Alternatives x prioritization criteria with non-negative real entries."""

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))
        object.__setattr__(self, "columns", tuple(self.columns))
        object.__setattr__(self, "values", _frozen_array(self.values, float))
        self._check_shape()


def validate_rating_matrix(matrix: RatingMatrix) -> list[Violation]:
    violations = []
    for i, row in enumerate(matrix.rows):
        for j, col in enumerate(matrix.columns):
            v = matrix.values[i, j]
            if not np.isfinite(v):
                violations.append(Violation(row, col, "missing or non-finite value"))
            elif v != round(float(v)):
                violations.append(Violation(row, col, f"non-integer rating {v}"))
            elif not RATING_MIN <= v <= RATING_MAX:
                violations.append(Violation(row, col, f"{int(v)} out of range [{RATING_MIN},{RATING_MAX}]"))
    return violations


def validate_decision_matrix(matrix: DecisionMatrix) -> list[Violation]:
    violations = []
    n, m = matrix.shape
    if n < 2:
        violations.append(Violation("*", "*", f"at least 2 alternatives required, got {n}"))
    if m < 1:
        violations.append(Violation("*", "*", "at least 1 criterion required"))
    for i, row in enumerate(matrix.rows):
        for j, col in enumerate(matrix.columns):
            v = matrix.values[i, j]
            if not np.isfinite(v):
                violations.append(Violation(row, col, "missing or non-finite value"))
            elif v < 0:
                violations.append(Violation(row, col, f"negative entry {v}"))
    return violations


def check_categories(categories: Sequence[Category]) -> None:
    seen: dict[str, str] = {}
    for cat in categories:
        for member in cat.members:
            if member in seen:
                raise ValueError(f"{member} belongs to both {seen[member]} and {cat.code}")
            seen[member] = cat.code


# ---------------------------------------------------------------------------
# Bundled reference data
# ---------------------------------------------------------------------------

_ACTIVITIES = [
    ("L1", "Regular Risk Assessment", "Conduct frequent risk assessments to identify potential vulnerabilities in the healthcare system."),
    ("L2", "Employee Training", "Provide continuous training for employees on data privacy and security protocols."),
    ("L3", "Strong Access Controls", "Implement strict access controls to ensure only authorized personnel can access sensitive data."),
    ("L4", "Data Encryption", "Encrypt patient data in transit and at rest to protect against unauthorized access."),
    ("L5", "Audit Trails", "Maintain detailed audit trails to monitor access and changes to patient data."),
    ("L6", "Anti-Malware Software", "Install and regularly update anti-malware software to protect against cyber threats."),
    ("L7", "Secure Data Storage", "Use secure storage solutions, such as encrypted databases, for patient data."),
    ("L8", "Data Minimization", "Only collect and retain the minimum amount of patient data necessary for healthcare purposes."),
    ("L9", "Incident Response Plan", "Develop and regularly update an incident response plan for potential data breaches."),
    ("L10", "Regular Software Updates", "Keep all software and systems updated to protect against vulnerabilities."),
    ("L11", "Multi-Factor Authentication", "Implement multi-factor authentication for accessing patient data systems."),
    ("L12", "Secure Communication Channels", "Use secure communication channels, such as encrypted email, for transmitting patient data."),
    ("L13", "Patient Consent Management", "Regularly obtain and manage patient consent for data use and sharing."),
    ("L14", "Third-Party Vendor Assessment", "Conduct thorough assessments of third-party vendors who have access to patient data."),
    ("L15", "Data Anonymization Techniques", "Apply data anonymization techniques where appropriate for research and analysis."),
    ("L16", "Physical Security Measures", "Enhance physical security measures to protect data storage and access areas."),
    ("L17", "Mobile Device Management", "Implement policies for secure use of mobile devices in accessing patient data."),
    ("L18", "Cybersecurity Insurance", "Consider obtaining cybersecurity insurance to mitigate financial risks associated with data breaches."),
    ("L19", "Regular Compliance Audits", "Conduct audits to ensure ongoing compliance with healthcare data protection regulations."),
    ("L20", "Patient Education", "Educate patients about their data rights and how to protect their health information."),
]

# code, name, members, mean profile over (G1, G2, G3)
_CATEGORIES = [
    ("C1", "Policy and Compliance Management", ("L1", "L9", "L13", "L14", "L19"), (5, 8, 9)),
    ("C2", "Employee Training and Awareness", ("L2", "L11", "L20"), (9, 9, 9)),
    ("C3", "Data Protection and Privacy Control", ("L3", "L4", "L7", "L8", "L15"), (4, 4, 8)),
    ("C4", "Monitoring and Response", ("L5", "L18"), (8, 8, 8)),
    ("C5", "Technology and Infrastructure Security", ("L6", "L10", "L12", "L16", "L17"), (5, 4, 8)),
]

_DECISION = [
    (4, 7, 5),
    (4, 8, 6),
    (5, 9, 6),
    (6, 7, 6),
    (7, 7, 5),
]

_EXPERTS = [
    ("X1", "Software Engineer", "B.Tech", 5),
    ("X2", "Software Engineer", "B.Tech", 6),
    ("X3", "Software Engineer", "M.Tech", 5),
    ("X4", "Software Engineer", "MCA", 6),
    ("X5", "Web Analyst", "MCA", 8),
    ("X6", "Data Analyst", "B.Tech", 6),
    ("X7", "Healthcare Manager", "B.Tech", 6),
    ("X8", "Healthcare Manager", "MBA", 8),
    ("X9", "Healthcare Manager", "MBA", 9),
    ("X10", "Healthcare Manager", "MBA", 8),
]

PAPER_WEIGHTS = (0.11, 0.63, 0.26)
PAPER_EPSILON = 0.5
PAPER_MIN_PTS = 2


@dataclass(frozen=True)
class PaperCatalog:
    activities: tuple[Activity, ...]
    g_criteria: tuple[Criterion, ...]
    e_criteria: tuple[Criterion, ...]
    ratings: RatingMatrix
    decision: DecisionMatrix
    experts: tuple[ExpertProfile, ...]
    categories: tuple[Category, ...]
    delphi_iterations: dict = field(default_factory=dict, hash=False)
    notes: tuple[str, ...] = ()

    def activity(self, code: str) -> Activity:
        for a in self.activities:
            if a.code == code:
                return a
        raise KeyError(code)


def _reconstructed_ratings() -> RatingMatrix:
    profile_of = {}
    for _, _, members, profile in _CATEGORIES:
        for code in members:
            profile_of[code] = profile
    rows = [code for code, _, _ in _ACTIVITIES]
    return RatingMatrix(rows, ("G1", "G2", "G3"), [profile_of[c] for c in rows])


def bundled_paper_catalog() -> PaperCatalog:
    """Return the reference healthcare-security dataset.

    The per-activity ratings are a reconstruction: each activity carries the
    mean profile of the category it was assigned to, since only category
    means and memberships were published.
    """
    activities = tuple(Activity(*a) for a in _ACTIVITIES)
    g = (
        Criterion("G1", "Functional Focus"),
        Criterion("G2", "Stakeholder Engagement"),
        Criterion("G3", "Strategic Objective"),
    )
    e = tuple(
        Criterion(cid, name, Kind.BENEFIT, Stage.PRIORITIZATION)
        for cid, name in (("E1", "Ease"), ("E2", "Effect"), ("E3", "Economics"))
    )
    decision = DecisionMatrix([c[0] for c in _CATEGORIES], [c.id for c in e], _DECISION)
    categories = tuple(Category(code, name, frozenset(members)) for code, name, members, _ in _CATEGORIES)
    return PaperCatalog(
        activities=activities,
        g_criteria=g,
        e_criteria=e,
        ratings=_reconstructed_ratings(),
        decision=decision,
        experts=tuple(ExpertProfile(*x) for x in _EXPERTS),
        categories=categories,
        delphi_iterations={"activities": 5, "categorization_criteria": 3, "prioritization_criteria": 2},
        notes=(
            "ratings reconstructed from published cluster means and memberships; "
            "per-activity raw ratings were not published",
        ),
    )
