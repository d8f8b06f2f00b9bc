//! Certifies the bundled gate-identity catalog.
//!
//! Every identity is checked by reducing `lhs · rhs⁻¹` to normal form with
//! the rewrite engine: the core must vanish, the displacement must vanish,
//! and the tracked phase must match the expected scalar. Run with:
//!
//! ```text
//! cargo run --example verify_identities
//! ```

use cvmbqc::algebra::identities::check_all;

fn main() -> cvmbqc::Result<()> {
    let outcomes = check_all()?;
    let mut failed = 0;
    for o in &outcomes {
        let verdict = if o.passed { "PASS" } else { "FAIL" };
        println!(
            "[{verdict}] {:28} residual atoms {}, displacement {:.2e}, phase {:.2e}  — {}",
            o.name, o.leftover_atoms, o.displacement_gap, o.phase_gap, o.summary
        );
        if !o.passed {
            failed += 1;
        }
    }
    println!("\n{} identities checked, {} failed", outcomes.len(), failed);
    if failed > 0 {
        std::process::exit(1);
    }
    Ok(())
}
