//! Error of the theorem check as the grid is refined and the orbit tail
//! tightened, driven through the same runner as the command-line tool.

use widom_cauchy::cli::{execute, Command, RunConfig};

const CONFIG: &str = r#"{
    "schema_version": "1",
    "q": [0.05],
    "zeta": [[0.3, 0.0]],
    "k": [2],
    "h": [[{"power": 2, "coeff": [2.0, 0.0]}, {"power": -1, "coeff": [1.0, 0.0]}]]
}"#;

fn main() {
    let config = RunConfig::from_json(CONFIG).expect("valid config");
    let report = execute(&config, Command::Sweep, 1).expect("sweep runs");
    println!("{:>6} {:>8} {:>12}", "M", "tail_tol", "error");
    for c in &report.cases {
        println!("{:6} {:8.0e} {:12.3e}", c.grid_size, c.tail_tol, c.rel_err.unwrap_or(f64::NAN));
    }
    for m in &report.summary.monotonicity {
        println!("{} axis non-increasing: {}", m.axis, m.non_increasing);
    }
}
