//! Parse a run configuration and print its canonical form.

use cqed_entangle::config::RunConfig;

fn main() -> cqed_entangle::Result<()> {
    let text = "\
# weaker coupling, Fock-state field
model.g0=0.05
model.nbar=3
field=fock 3
initial.c00=0 0
initial.c01=0.7071067811865476 0
initial.c10=0.7071067811865476 0
initial.c11=0 0
sweep.nbar=1,2,5,10
";
    let cfg = RunConfig::parse(text)?;
    cfg.validate()?;
    print!("{}", cfg.to_canonical());
    assert_eq!(RunConfig::parse(&cfg.to_canonical())?, cfg);
    Ok(())
}
