use stair::cli::{cost_row, e_sweep};
use stair::{Method, StairConfig};

#[test]
fn deep_bursts_cost_more_updates_than_spread_ones() {
    for n in [8, 12, 16] {
        let penalty = |e: &[usize]| cost_row(StairConfig::new(n, 16, 2, e, 8).unwrap()).unwrap().update_penalty;
        assert!(penalty(&[4]) >= penalty(&[1, 1, 1, 1]), "n={n}");
        assert!(penalty(&[1, 1, 1, 1]) > 2.0);
    }
}

#[test]
fn reuse_beats_standard_and_crosses_over_by_m_prime() {
    for s in 1..=4 {
        let rows: Vec<_> =
            e_sweep(8, 16, 2, s).into_iter().map(|e| cost_row(StairConfig::new(8, 16, 2, &e, 8).unwrap()).unwrap()).collect();
        for row in &rows {
            assert!(row.x_up.min(row.x_down) <= row.x_standard, "{row:?}");
        }
        // from s = 2 on, one deep slot favours downstairs and s shallow
        // slots favour upstairs; at s = 1 the two are nearly tied
        if s > 1 {
            let single = rows.iter().find(|r| r.m_prime == 1).unwrap();
            assert_eq!(single.chosen, Method::Downstairs);
            let ones = rows.iter().find(|r| r.m_prime == s).unwrap();
            assert_eq!(ones.chosen, Method::Upstairs);
        }
    }
}

#[test]
fn no_sector_tolerance_costs_the_same_everywhere() {
    for (n, r, m) in [(8, 16, 2), (6, 4, 1), (16, 16, 3)] {
        let row = cost_row(StairConfig::new(n, r, m, &[], 8).unwrap()).unwrap();
        assert_eq!(row.x_standard, r * (n - m) * m);
        assert_eq!((row.x_up, row.x_down), (row.x_standard, row.x_standard));
    }
}
