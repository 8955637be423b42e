//! Adaptive order-0 arithmetic coding and the shaping code-length benchmark.

mod bench;
mod coder;
mod stream;

pub use bench::{run_codec_benchmark, ArmStats, BenchReport};
pub use coder::{decode, encode, ideal_code_length, CodecModelConfig, EncodedBits, TERMINATION_BITS};
pub use stream::{read_stream, write_stream, STREAM_VERSION};
