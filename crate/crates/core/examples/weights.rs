//! Cell weights `G_d` of the fractional operator against their quadrature oracle, and the
//! row-sum and sign properties of the assembled matrix.
//!
//! `cargo run --example weights -- 0.5 40`

use fracdg::audit::{weight_lemmas, weight_oracle_table};

fn main() -> fracdg::Result<()> {
    let mut args = std::env::args().skip(1);
    let lambda: f64 = args.next().map_or(0.5, |s| s.parse().expect("λ"));
    let inv_dx: usize = args.next().map_or(40, |s| s.parse().expect("1/Δx"));

    println!("{:>4} {:>14} {:>14} {:>10}", "d", "G_d", "oracle", "rel_err");
    for (d, g, o, _, rel) in weight_oracle_table(lambda, 1.0 / inv_dx as f64, 8)? {
        println!("{d:>4} {g:>14.6e} {o:>14.6e} {rel:>10.2e}");
    }

    let l = weight_lemmas(lambda, inv_dx)?;
    println!("row sum / |G_0|          {:.2e}", l.row_sum);
    println!("asymmetry                {:.2e}", l.asymmetry);
    println!("negative off-diagonal    {:.2e}", l.negative_off_diagonal);
    println!("diagonal defect          {:.2e}", l.diagonal);
    Ok(())
}
