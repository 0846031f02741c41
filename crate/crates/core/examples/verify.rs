use boostlab::verification::{criterion, VerifyOptions};

fn main() {
    let mut opts = VerifyOptions::default();
    if let Ok(n) = std::env::var("NODES") {
        opts.nodes = n.parse().expect("NODES");
    }
    for id in std::env::args().skip(1).map(|a| a.parse().expect("criterion id")) {
        let t = std::time::Instant::now();
        print!("{}", criterion(id, &opts));
        println!("    ({:.1}s)", t.elapsed().as_secs_f64());
    }
}
