use std::time::Instant;

use p1_functors::corpus::corpus;
use p1_functors::structure::decompose;

fn main() {
    let specs = corpus(2024, 200);
    let start = Instant::now();
    let mut worst = (0.0, 0);
    for (k, spec) in specs.iter().enumerate() {
        let t = Instant::now();
        let f = spec.build();
        let (d, _) = decompose(&f).expect("decomposes");
        assert_eq!(d, spec.decomposition);
        let s = t.elapsed().as_secs_f64();
        if s > worst.0 {
            worst = (s, k);
        }
    }
    println!("total {:.2}s, worst {:.3}s at {}", start.elapsed().as_secs_f64(), worst.0, worst.1);
}
