"""Knowledge network of labelled nodes joined by multi-strand links."""

from .embedder import (
    EmbedReport,
    ScenarioStats,
    build_link,
    classify_scenario,
    embed_corpus,
    embed_statement,
    resolve_or_create_node,
)
from .lifecycle import FadePolicy, FadeReport, fade_tick, recreate_link, touch_link
from .model import (
    Additivity,
    Axis,
    Coordinate,
    Inclusivity,
    Integrativity,
    Knn,
    Link,
    LinkDescriptor,
    LinkState,
    Statement,
    Strand,
    compose_link,
    integrativity_of,
)
from .parser import (
    RelationTable,
    default_relation_table,
    format_statement,
    load_relation_table,
    parse_corpus,
    parse_statement,
    validate_statement,
)
from .retriever import (
    Cone,
    ConeRow,
    Thread,
    build_cone,
    cone_metrics,
    dataset_projection,
    expand_threads,
    find_thread,
)
from .store import Store, SystemStats, restore, snapshot, system_stats

__version__ = "0.1.0"
