import hashlib
from decimal import Decimal, ROUND_HALF_UP
from math import isqrt
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Tuple, Union
from kpc.models import Family, Instance, ProfitType
from kpc.schemas import GeneratorSpec
from kpc.repositories.instance_repo import InstanceRepository
from kpc.core.errors import SpecInvalid
from kpc.core.logging import get_logger

logger = get_logger(__name__)

MASK64 = (1 << 64) - 1
FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3

# class -> (items, weight range, base capacity)
SET1_CLASSES: Dict[int, Tuple[int, Tuple[int, int], int]] = {
    1: (120, (20, 100), 150),
    2: (250, (20, 100), 150),
    3: (500, (20, 100), 150),
    4: (1000, (20, 100), 150),
    5: (60, (250, 500), 1000),
    6: (120, (250, 500), 1000),
    7: (349, (250, 500), 1000),
    8: (501, (250, 500), 1000),
}
SET1_VARIANTS: Tuple[Tuple[ProfitType, int], ...] = (
    (ProfitType.CORRELATED, 1), (ProfitType.CORRELATED, 3), (ProfitType.CORRELATED, 10),
    (ProfitType.RANDOM, 1), (ProfitType.RANDOM, 3), (ProfitType.RANDOM, 10),
)
SET1_MULTIPLIERS = (1, 3, 10)
SET1_DENSITIES = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)

SET2_ITEMS = (500, 1000)
SET2_CAPACITIES = (1000, 2000)
SET2_DENSITIES = (0.001, 0.002, 0.005, 0.01, 0.02, 0.05)
SET2_PROFIT_TYPES = (ProfitType.CORRELATED, ProfitType.RANDOM)
SET2_WEIGHT_RANGE = (20, 100)

REPLICATES = 10
PROFIT_RANGE = (1, 100)
CORRELATION_OFFSET = 10


class SplitMix64:
    """splitmix64 stream; uniform integers by modulo reduction"""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        return self.next() % bound

    def uniform(self, low: int, high: int) -> int:
        """Integer in [low, high]"""
        return low + self.below(high - low + 1)


def fnv1a_64(data: bytes) -> int:
    h = FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * FNV_PRIME) & MASK64
    return h


def set1_spec(
    class_id: int,
    profit_type: ProfitType,
    capacity_multiplier: int,
    density: float,
    replicate: int,
    master_seed: int = 0,
) -> GeneratorSpec:
    if class_id not in SET1_CLASSES:
        raise SpecInvalid(f"set1 class must be 1..8, got {class_id}")
    n_items, weight_range, base_capacity = SET1_CLASSES[class_id]
    return GeneratorSpec(
        family=Family.SET1,
        class_id=class_id,
        n_items=n_items,
        weight_range=weight_range,
        base_capacity=base_capacity,
        capacity_multiplier=capacity_multiplier,
        profit_type=profit_type,
        density=density,
        replicate=replicate,
        master_seed=master_seed,
    )


def set2_spec(
    n_items: int,
    capacity: int,
    profit_type: ProfitType,
    density: float,
    replicate: int,
    master_seed: int = 0,
) -> GeneratorSpec:
    return GeneratorSpec(
        family=Family.SET2,
        class_id=0,
        n_items=n_items,
        weight_range=SET2_WEIGHT_RANGE,
        base_capacity=capacity,
        capacity_multiplier=1,
        profit_type=profit_type,
        density=density,
        replicate=replicate,
        master_seed=master_seed,
    )


def canonical_key(spec: GeneratorSpec) -> str:
    """
    family/class/n/mult/type/density/rep, density with 3 decimals (set1) or 4 (set2).
    For set2 the class slot holds the base capacity.
    """
    slot = spec.class_id if spec.family == Family.SET1 else spec.base_capacity
    return "/".join((
        spec.family.value,
        str(slot),
        str(spec.n_items),
        str(spec.capacity_multiplier),
        spec.profit_type.value,
        spec.density_label,
        str(spec.replicate),
    ))


def parse_canonical_key(name: str, master_seed: int = 0) -> Optional[GeneratorSpec]:
    """Inverse of canonical_key; None when the name is not a generator name"""
    parts = name.split("/")
    if len(parts) != 7:
        return None
    family, slot, n_items, multiplier, profit_type, density, replicate = parts
    try:
        if family == Family.SET1.value:
            spec = set1_spec(int(slot), ProfitType(profit_type), int(multiplier),
                             float(density), int(replicate), master_seed)
            if spec.n_items != int(n_items):
                return None
            return spec
        if family == Family.SET2.value:
            return set2_spec(int(n_items), int(slot), ProfitType(profit_type),
                             float(density), int(replicate), master_seed)
    except ValueError:
        return None
    return None


def derive_seed(spec: GeneratorSpec) -> int:
    return fnv1a_64(canonical_key(spec).encode("ascii")) ^ spec.master_seed


def edge_count(n: int, density: Union[str, float, Decimal]) -> int:
    """round(d * n(n-1)/2), half up, computed in decimal"""
    pairs = n * (n - 1) // 2
    exact = Decimal(str(density)) * pairs
    return int(exact.quantize(Decimal(1), rounding=ROUND_HALF_UP))


def pair_from_index(k: int) -> Tuple[int, int]:
    """Pair (i, j), i < j, at column-major index k = j(j-1)/2 + i"""
    j = (1 + isqrt(1 + 8 * k)) // 2
    return k - j * (j - 1) // 2, j


def sample_edges(rng: SplitMix64, n: int, m: int) -> Tuple[Tuple[int, int], ...]:
    """
    First m entries of a partial Fisher-Yates shuffle of all n(n-1)/2 pair
    indices. Displaced entries are kept in a dict instead of a full array.
    """
    total = n * (n - 1) // 2
    if not 0 <= m <= total:
        raise SpecInvalid(f"Cannot place {m} edges among {n} items")
    displaced: Dict[int, int] = {}
    chosen: List[int] = []
    for k in range(m):
        j = k + rng.below(total - k)
        at_j = displaced.get(j, j)
        displaced[j] = displaced.get(k, k)
        chosen.append(at_j)
    return tuple(sorted(pair_from_index(idx) for idx in chosen))


def check_spec(spec: GeneratorSpec) -> None:
    low, high = spec.weight_range
    if not 1 <= low <= high:
        raise SpecInvalid(f"Weight range {spec.weight_range} must satisfy 1 <= low <= high")
    if spec.family == Family.SET1:
        if spec.class_id not in SET1_CLASSES:
            raise SpecInvalid(f"set1 class must be 1..8, got {spec.class_id}")
        if spec.capacity_multiplier not in SET1_MULTIPLIERS:
            raise SpecInvalid(f"set1 capacity multiplier must be 1, 3 or 10, got {spec.capacity_multiplier}")
    else:
        if spec.class_id != 0:
            raise SpecInvalid("set2 specs carry no class")
        if spec.capacity_multiplier != 1:
            raise SpecInvalid("set2 capacity multiplier is fixed at 1")


def generate(spec: GeneratorSpec) -> Instance:
    """
    Weights first, then profits (random type only), then the conflict graph,
    all from one splitmix64 stream seeded by derive_seed(spec).
    """
    check_spec(spec)
    rng = SplitMix64(derive_seed(spec))
    n = spec.n_items
    low, high = spec.weight_range
    weights = tuple(rng.uniform(low, high) for _ in range(n))
    if spec.profit_type == ProfitType.RANDOM:
        profits = tuple(rng.uniform(*PROFIT_RANGE) for _ in range(n))
    else:
        profits = tuple(w + CORRELATION_OFFSET for w in weights)
    edges = sample_edges(rng, n, edge_count(n, spec.density_label))
    return Instance.model_construct(
        name=canonical_key(spec),
        capacity=spec.capacity,
        profits=profits,
        weights=weights,
        edges=edges,
    )


def family_specs(family: Family, master_seed: int = 0) -> Iterator[GeneratorSpec]:
    """set1: class, variant, density, replicate. set2: items, capacity, density, type, replicate."""
    family = Family(family)
    if family == Family.SET1:
        for class_id in sorted(SET1_CLASSES):
            for profit_type, multiplier in SET1_VARIANTS:
                for density in SET1_DENSITIES:
                    for replicate in range(REPLICATES):
                        yield set1_spec(class_id, profit_type, multiplier, density, replicate, master_seed)
    else:
        for n_items in SET2_ITEMS:
            for capacity in SET2_CAPACITIES:
                for density in SET2_DENSITIES:
                    for profit_type in SET2_PROFIT_TYPES:
                        for replicate in range(REPLICATES):
                            yield set2_spec(n_items, capacity, profit_type, density, replicate, master_seed)


def generate_family(family: Family, master_seed: int = 0) -> Iterator[Instance]:
    for spec in family_specs(family, master_seed):
        yield generate(spec)


def relative_path(spec: GeneratorSpec) -> Path:
    if spec.family == Family.SET1:
        group = Path("set1", f"class{spec.class_id}", spec.variant)
    else:
        group = Path("set2", f"n{spec.n_items}-c{spec.base_capacity}", spec.profit_type.value)
    return group / f"d{spec.density_label}" / f"inst{spec.replicate}.kpc"


def random_instance(
    rng: SplitMix64,
    n: int,
    density: float,
    profit_range: Tuple[int, int] = PROFIT_RANGE,
    weight_range: Tuple[int, int] = (1, 100),
    capacity_ratio: float = 0.5,
    name: str = "",
) -> Instance:
    """Small random instance on the same stream and edge sampler as the benchmarks"""
    weights = tuple(rng.uniform(*weight_range) for _ in range(n))
    profits = tuple(rng.uniform(*profit_range) for _ in range(n))
    capacity = int(sum(weights) * capacity_ratio)
    edges = sample_edges(rng, n, edge_count(n, density))
    return Instance.model_construct(
        name=name, capacity=capacity, profits=profits, weights=weights, edges=edges
    )


class GeneratorService:
    def __init__(self, repo: InstanceRepository):
        self.repo = repo

    def write_family(self, family: Family, master_seed: int, out_dir: Union[str, Path]) -> int:
        """Write the whole family under out_dir; returns the number of files"""
        out_dir = Path(out_dir)
        count = 0
        for spec in family_specs(family, master_seed):
            self.repo.write(generate(spec), out_dir / relative_path(spec))
            count += 1
        logger.info(
            "Benchmark family written",
            family=Family(family).value,
            master_seed=master_seed,
            instances=count,
            out_dir=str(out_dir)
        )
        return count

    @staticmethod
    def tree_checksum(root: Union[str, Path]) -> str:
        """sha256 over every file's relative path and bytes, in sorted path order"""
        root = Path(root)
        digest = hashlib.sha256()
        for path in sorted(p for p in root.rglob("*") if p.is_file()):
            digest.update(path.relative_to(root).as_posix().encode("utf-8") + b"\0")
            digest.update(path.read_bytes())
        return digest.hexdigest()
