//! Print the bundled K=6, N=4, M=4 codebook: factor graph, per-user
//! energy, labellings and codeword distances.
//!
//!     cargo run --example codebook_inspect [path/to/codebook.cb]

use polar_scma::scma::{load_codebook, ScmaCodebook};

fn main() -> polar_scma::Result<()> {
    let cb = match std::env::args().nth(1) {
        Some(path) => load_codebook(path)?,
        None => ScmaCodebook::default_k6_n4_m4(),
    };
    println!(
        "K={} users, N={} resources, M={} points ({} bits/symbol)",
        cb.n_users(),
        cb.n_resources(),
        cb.m_points(),
        cb.bits_per_symbol()
    );
    println!("\nmapping matrix S:");
    for n in 0..cb.n_resources() {
        let row: Vec<&str> = (0..cb.n_users()).map(|k| if cb.mapping(n, k) { "1" } else { "0" }).collect();
        println!("  {}   users {:?}", row.join(" "), cb.users_of_resource(n));
    }
    for k in 0..cb.n_users() {
        println!("\nuser {k}: resources {:?}, energy {:.6}", cb.resources_of_user(k), cb.user_energy(k));
        for c in 0..cb.m_points() {
            let pts: Vec<String> = cb
                .resources_of_user(k)
                .iter()
                .map(|&n| {
                    let z = cb.point(n, k, c);
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            println!(
                "  index {c}: gray label {:?}, sp label {:?}, points {}",
                cb.gray().bits_of_index(c),
                cb.sp().bits_of_index(c),
                pts.join("  ")
            );
        }
    }
    println!("\nsquared distances between codewords of user 0:");
    for a in 0..cb.m_points() {
        let row: Vec<String> = (0..cb.m_points())
            .map(|b| format!("{:.3}", cb.codeword_distance_sq(0, a, b)))
            .collect();
        println!("  {}", row.join("  "));
    }
    Ok(())
}
