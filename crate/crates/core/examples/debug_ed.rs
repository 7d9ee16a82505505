use rayon::prelude::*;
use xxz_bell::correlations::ed_correlations;
use xxz_bell::ed::EdConfig;

fn main() {
    let cfg = EdConfig::default();
    // dense scan across the whole sweep range for r=2: any errors left?
    let deltas: Vec<f64> = (0..=450).map(|i| -1.5 + 0.01 * i as f64).collect();
    let bad: Vec<String> = deltas
        .par_iter()
        .filter_map(|&d| {
            ed_correlations(d, 2, &cfg)
                .err()
                .map(|e| format!("delta={d:.3}: {e}"))
        })
        .collect();
    println!("failures across [-1.5, 3]: {}", bad.len());
    for b in bad.iter().take(8) {
        println!("  {b}");
    }
}
