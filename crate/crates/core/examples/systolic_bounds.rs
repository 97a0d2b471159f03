//! Closed-form systolic-area bounds and the reference table.
//!
//! `cargo run --example systolic_bounds`

use cone_systole::bounds::{
    format_table, is_loewner, loewner_disk_criterion, reference_table, sigma_lower_bound,
    BoundsReport,
};

fn main() -> cone_systole::Result<()> {
    for chi in [0, -1, -2, -4, -10] {
        println!("chi = {chi:>3}: sigma >= {:.6}", sigma_lower_bound(chi)?);
    }
    for g in 2..=5 {
        let sigma = (2 * g - 1) as f64;
        let (_, loewner) = is_loewner(sigma, 1.0)?;
        let (c, disk) = loewner_disk_criterion(g, sigma)?;
        println!(
            "staircase g={g}: sigma = {sigma}, Loewner {loewner}, sigma <= {c:.4}(g-1): {disk}"
        );
    }
    let rep = BoundsReport::new(-2, Some(2), Some(3.0), Some(1.0))?;
    println!(
        "ball area bound at r = 1/2: {:.7}",
        rep.prop_end_bound(0.5).unwrap()
    );
    println!();
    print!("{}", format_table(&reference_table()));
    Ok(())
}
