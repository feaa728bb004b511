//! The verification driver behind `kasami verify`, run on (3, 2, 1).

use kasami::cli::{cmd_verify, Format, RunConfig};
use kasami::KasamiParams;

fn main() -> kasami::Result<()> {
    let cfg = RunConfig::new(KasamiParams::new(3, 2, 1)?);
    let report = cmd_verify(&cfg)?;
    print!("{}", report.render(Format::Text));
    std::process::exit(if report.all_pass() { 0 } else { 1 });
}
