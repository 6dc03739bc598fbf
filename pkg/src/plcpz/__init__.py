"""plcpz: bidirectional text compression driven by PLCP maxima."""

from .text_index import (Text, TextError, IndexBundle, make_text, build_index,
                         lcp_from_plcp, dump_index, load_index, SENTINEL)
from .scheme import (Threshold, Factor, Factorization, CodingError,
                     scheme_factorize, verify_cycle_free, MIN_THETA)
from .factorizer import (stream_factorize, detect_peaks, pipeline_compress,
                         lower_bound_text, ScanStats, PlcpSource)
from .codec import encode, encode_bytes, decode, decode_bytes, CodecError
from .decompress import (decompress, decompress_oracle, decompress_pj,
                         compact_im, compact_em, build_dep_streams,
                         graph_stats, DepGraphStats, PjMetrics,
                         random_bidirectional_coding, chain_coding,
                         oracle_rounds)

__all__ = [
    "Text", "TextError", "IndexBundle", "make_text", "build_index",
    "lcp_from_plcp", "dump_index", "load_index", "SENTINEL",
    "Threshold", "Factor", "Factorization", "CodingError",
    "scheme_factorize", "verify_cycle_free", "MIN_THETA",
    "stream_factorize", "detect_peaks", "pipeline_compress",
    "lower_bound_text", "ScanStats", "PlcpSource",
    "encode", "encode_bytes", "decode", "decode_bytes", "CodecError",
    "decompress", "decompress_oracle", "decompress_pj",
    "compact_im", "compact_em", "build_dep_streams", "graph_stats",
    "DepGraphStats", "PjMetrics", "random_bidirectional_coding",
    "chain_coding", "oracle_rounds",
]
