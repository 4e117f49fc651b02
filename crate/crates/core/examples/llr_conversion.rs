//! Turn one symbol posterior into bit LLRs: all bits at once for BIPCM,
//! level by level for MLPC, and count the marginalizations each needs.
//!
//!     cargo run --example llr_conversion

use polar_scma::schemes::{bit_llrs_from_posterior, mlpc_level_llr, LlrWork};
use polar_scma::scma::ScmaCodebook;

fn main() {
    let cb = ScmaCodebook::default_k6_n4_m4();
    let post = [0.55, 0.25, 0.15, 0.05];
    println!("posterior over codebook indices: {post:?}");

    let mut work = LlrWork::default();
    let mut llrs = vec![0.0; cb.bits_per_symbol()];
    bit_llrs_from_posterior(&post, cb.gray(), &mut llrs, &mut work);
    println!("\nBIPCM (Gray labelling): LLRs {llrs:.4?}, marginalizations {}", work.summations);

    let mut work = LlrWork::default();
    let level0 = mlpc_level_llr(&post, cb.sp(), 0, &[], &mut work);
    let decided = u8::from(level0 < 0.0);
    let level1 = mlpc_level_llr(&post, cb.sp(), 1, &[decided], &mut work);
    println!(
        "MLPC (set partitioning): level 0 LLR {level0:.4}, level 1 LLR {level1:.4} given c1={decided}, \
         marginalizations {}",
        work.summations
    );
    println!("\nper N_c-bit frame: BIPCM N_c, MLPC N_c/2 with two levels");
}
