"""Rectangular (grid) diagrams of links: moves, invariants, simplification, braids."""

from .convert import (
    BraidWord,
    braid_to_grid,
    connected_sum,
    distant_union,
    grid_to_braid,
    random_diagram,
    random_unknot,
    torus_grid,
    whitehead_fixtures,
    zero_alexander_fixture,
)
from .errors import GridError, LimitExceeded, NotApplicable, ParseError
from .grid import (
    CanonicalKey,
    GridDiagram,
    all_orientations,
    canonical_form,
    canonical_key,
    components,
    default_orientation,
    read_diagram,
    render_ascii,
    transpose_dual,
    trivial_diagram,
    validate,
    write_diagram,
)
from .invariants import crossings, is_rigid, writhe_pair, writhe_report, writhe_test
from .moves import (
    CycCols,
    CycRows,
    Destab,
    MoveSequence,
    Stab,
    XchgCols,
    XchgRows,
    apply,
    apply_all,
    applicable_moves,
    destabilizations,
    exchange_moves,
    generalized_exchange,
    generalized_stabilization,
)
from .simplify import (
    SearchConfig,
    SimplifyOutcome,
    census,
    check_certificate,
    decompose,
    detect_composite,
    detect_split,
    exchange_orbit,
    factor_at,
    monotonic_simplify,
)

__version__ = "0.1.0"
