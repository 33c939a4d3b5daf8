//! Config parsing, sequence and bitmap persistence, and run directories.

mod bitfile;
mod config;
mod results;
mod sequence;

pub use bitfile::{read_bitmap, write_bitmap, BITMAP_MAGIC, BITMAP_VERSION};
pub use config::parse_config;
pub use results::{
    emit_results, load_result, sha256_hex, window_rows, write_ndjson, write_windows_csv,
    FileDigest, RunManifest, WindowRow, SEQUENCE_SAVE_LIMIT,
};
pub use sequence::{load_sequence, read_sequence, save_sequence, write_sequence, SEQUENCE_MAGIC};
