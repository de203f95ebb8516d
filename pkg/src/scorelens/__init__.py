"""Structure, similarity and overview analysis for symbolic guitar scores."""

from .bundle import (AnalysisBundle, LevelAnalysis, SchemaViolation,
                     TrackAnalysis, UnsupportedVersion, build_bundle,
                     deserialize, serialize)
from .colors import (ColorAssignment, ColorScale, Dendrogram, Merge, cluster,
                     cluster_colors, contrast_text_color, cut, map_direct,
                     map_identical, mds_1d, note_pitch_color, scale_color)
from .compression import (Leaf, Run, Seq, build_repetition_tree,
                          canonical_ids, expand)
from .model import (Bar, Note, Score, Section, Track, pitch_name, validate)
from .musicxml import (MalformedXml, MissingDivisions, ParseOptions,
                       UnsupportedElement, UnsupportedRoot, parse_score)
from .render import RenderConfig, render_bar, render_compact, render_compressed
from .segmentation import (Harmony, HierarchyNode, Segment, build_hierarchy,
                           extract_harmonies, segment_bars, segment_sections)
from .similarity import (distance_matrix, harmony_distance_matrix,
                         jaccard_similarity, levenshtein, normalized_distance,
                         pitch_sequence)

__version__ = "0.1.0"
