//! MTTDL of a 10 PB SATA system for several codes at two bit error rates,
//! under independent and bursty sector failures.

use stair::reliability::{analyze, CodeSpec, Coverage, ReliabilityParams, SectorModel};

fn main() -> stair::Result<()> {
    let codes = ["rs", "sd:1", "stair:1", "stair:3", "stair:1,2", "stair:1,1,1"];
    let models = [SectorModel::Independent, SectorModel::Correlated { b1: 0.98, alpha: 1.79 }];
    for model in models {
        println!("{model:?}");
        for p_bit in [1e-14, 1e-12] {
            let params = ReliabilityParams::sata(p_bit, model);
            for c in codes {
                let spec = CodeSpec::new(8, 16, 1, c.parse::<Coverage>()?);
                let rep = analyze(&params, &spec)?;
                println!(
                    "  P_bit={p_bit:.0e} {c:<12} arrays {:>5}  P_str {:.3e}  MTTDL {:.3e} h",
                    rep.n_arr, rep.p_str, rep.mttdl_sys_hours
                );
            }
        }
    }
    Ok(())
}
