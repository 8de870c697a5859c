"""Object-centric process performance analysis.

Ingests object-centric event logs, discovers object-centric Petri nets,
replays logs on them, and computes per-activity performance measures
such as waiting, synchronization, pooling, and lagging times.
"""

from .discovery import (
    DFG,
    ProcessTree,
    build_dfg,
    discover_ocpn,
    imd_discover,
    tree_to_net,
)
from .errors import (
    EmptyLog,
    InvalidWindow,
    MalformedBinding,
    MissingVisit,
    NonFittingLog,
    NonFittingTrace,
    NotEnabled,
    OperaError,
    ParseError,
    SchemaError,
    TimestampError,
    TypeConflict,
    UnknownMeasure,
    UnknownObjectType,
)
from .metrics import (
    MeasureKind,
    MeasureStats,
    PerformanceReport,
    analyze,
    expand_measures,
    measure_basic,
    measure_frequency,
    measure_typed,
    related_token_visits,
    report_to_json,
)
from .ocel import OCEL, Event, FlatLog, FlatTrace, filter_window, flatten
from .ocel_io import import_log, serialize_log
from .ocpn import (
    OCPN,
    AcceptingNet,
    Binding,
    LabeledPetriNet,
    Marking,
    fire,
    is_enabled,
    model_from_json,
    model_to_json,
    project,
)
from .replay import (
    EventOccurrence,
    ReplayResult,
    TokenVisit,
    dump_replay,
    replay,
    replay_object,
)
from .viz import to_dot

__version__ = "0.1.0"
