"""In-process retrieval emulation.

Each simulated server keeps the t words of its column evaluated on a concrete
database. A client reads words one request at a time and reconstructs a part
by XOR-ing the words whose cells sum to that part's unit vector.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import DimensionError, ParameterError, RecoveryError
from .gf2core import BitVec, express
from .models import PirArrayCode, RecoveryCertificate
from .settings import load_cfg

logger = logging.getLogger(__name__)


def _word_mask(word_bits: int) -> int:
    if not 1 <= word_bits <= 64:
        raise ParameterError(f"word size must be between 1 and 64 bits, got {word_bits}")
    return (1 << word_bits) - 1


@dataclass(frozen=True)
class Database:
    words: np.ndarray  # uint64, one word per part
    word_bits: int = 64

    def __post_init__(self):
        words = np.asarray(self.words, dtype=np.uint64)
        if words.ndim != 1 or words.size == 0:
            raise DimensionError(f"database must be a non-empty vector of words, got shape {words.shape}")
        mask = _word_mask(self.word_bits)
        if int(words.max()) > mask:
            raise DimensionError(f"database word exceeds {self.word_bits} bits")
        object.__setattr__(self, "words", words)

    @property
    def p(self) -> int:
        return int(self.words.size)

    def part(self, i: int) -> int:
        return int(self.words[i])

    @classmethod
    def zeros(cls, p: int, word_bits: int = 64) -> "Database":
        return cls(np.zeros(p, dtype=np.uint64), word_bits)

    @classmethod
    def random(cls, p: int, rng: np.random.Generator, word_bits: int = 64) -> "Database":
        raw = rng.integers(0, np.iinfo(np.uint64).max, size=p, dtype=np.uint64, endpoint=True)
        return cls(raw & np.uint64(_word_mask(word_bits)), word_bits)


@dataclass(frozen=True)
class WordRequest:
    server: int
    cell: int


@dataclass(frozen=True)
class WordResponse:
    server: int
    cell: int
    word: int


@dataclass(frozen=True)
class ServerState:
    server_id: int
    words: Tuple[int, ...]

    def answer(self, req: WordRequest) -> WordResponse:
        if req.server != self.server_id:
            raise ParameterError(f"request for server {req.server + 1} sent to server {self.server_id + 1}")
        if not 0 <= req.cell < len(self.words):
            raise ParameterError(f"server {self.server_id + 1} has no cell {req.cell + 1}")
        return WordResponse(req.server, req.cell, self.words[req.cell])


def _cell_word(db: Database, cell: BitVec) -> int:
    parts = list(cell.parts())
    if not parts:
        return 0
    return int(np.bitwise_xor.reduce(db.words[parts]))


def deploy(code: PirArrayCode, db: Database) -> List[ServerState]:
    if db.p != code.p:
        raise DimensionError(f"database has {db.p} parts, code expects p={code.p}")
    return [
        ServerState(j, tuple(_cell_word(db, cell) for cell in column))
        for j, column in enumerate(code.columns)
    ]


def get_word(servers: Sequence[ServerState], server: int, cell: int) -> int:
    if not 0 <= server < len(servers):
        raise ParameterError(f"no server {server + 1} among {len(servers)}")
    return servers[server].answer(WordRequest(server, cell)).word


def recover_part(
    servers: Sequence[ServerState],
    code: PirArrayCode,
    cert: RecoveryCertificate,
    i: int,
    set_index: int,
) -> int:
    if not 0 <= i < code.p:
        raise ParameterError(f"part index {i + 1} out of range 1..{code.p}")
    sets = cert.parts[i]
    if not 0 <= set_index < len(sets):
        raise ParameterError(f"x_{i + 1} has {len(sets)} recovery sets, no set #{set_index + 1}")
    cells = [(col, row) for col in sorted(sets[set_index].cols) for row in range(code.t)]
    combo = express([code.cell(row, col) for col, row in cells], BitVec.unit(code.p, i))
    if combo is None:
        raise RecoveryError(f"set #{set_index + 1} of x_{i + 1} does not span x_{i + 1}")
    word = 0
    for idx in combo:
        col, row = cells[idx]
        word ^= get_word(servers, col, row)
    return word


@dataclass(frozen=True)
class RecoveryFailure:
    part: int
    set_index: int
    expected: int
    got: Optional[int]
    detail: str = ""

    def __str__(self) -> str:
        got = "none" if self.got is None else f"{self.got:#x}"
        msg = f"x_{self.part + 1} set #{self.set_index + 1}: expected {self.expected:#x}, got {got}"
        return msg + (f" ({self.detail})" if self.detail else "")


@dataclass
class EmulationReport:
    recoveries: int = 0
    stored_words: int = 0
    databases: int = 0
    failures: List[RecoveryFailure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def merge(self, other: "EmulationReport") -> None:
        self.recoveries += other.recoveries
        self.stored_words = max(self.stored_words, other.stored_words)
        self.databases += other.databases
        self.failures.extend(other.failures)


def emulate_all(code: PirArrayCode, cert: RecoveryCertificate, db: Database) -> EmulationReport:
    servers = deploy(code, db)
    report = EmulationReport(stored_words=sum(len(s.words) for s in servers), databases=1)
    for i, sets in enumerate(cert.parts[: code.p]):
        expected = db.part(i)
        for idx in range(len(sets)):
            report.recoveries += 1
            try:
                got = recover_part(servers, code, cert, i, idx)
            except (RecoveryError, ParameterError) as e:
                report.failures.append(RecoveryFailure(i, idx, expected, None, str(e)))
                continue
            if got != expected:
                report.failures.append(RecoveryFailure(i, idx, expected, got))
    if report.failures:
        logger.warning("emulation: %d of %d recoveries failed", len(report.failures), report.recoveries)
    return report


def emulate_trials(
    code: PirArrayCode,
    cert: RecoveryCertificate,
    trials: Optional[int] = None,
    seed: Optional[int] = None,
    word_bits: Optional[int] = None,
) -> EmulationReport:
    """Run emulate_all over `trials` random databases drawn from one seeded generator."""
    cfg = load_cfg()["emulator"]
    trials = cfg["trials"] if trials is None else trials
    seed = cfg["seed"] if seed is None else seed
    word_bits = cfg["word_bits"] if word_bits is None else word_bits
    rng = np.random.default_rng(seed)
    total = EmulationReport()
    for _ in range(trials):
        total.merge(emulate_all(code, cert, Database.random(code.p, rng, word_bits)))
    logger.info("emulated %d databases, %d recoveries, %d failures", total.databases, total.recoveries, len(total.failures))
    return total
