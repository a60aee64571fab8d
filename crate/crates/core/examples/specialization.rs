//! Specialization ratio decomposition from published set sizes: Applied
//! Biology and Social Sciences rows for a handful of countries.

use refclass::indicators::SpecializationRow;

type Row = (&'static str, f64, f64, f64);

const APPLIED_BIOLOGY: [Row; 4] = [
    ("JAPAN", 14_245.7, 36_361.54, 73_483.88),
    ("KOREA", 10_476.0, 24_248.79, 46_867.38),
    ("TAIWAN", 4_101.7, 8_475.84, 14_467.26),
    ("BRAZIL", 27_728.6, 34_755.65, 134_909.64),
];
const APPLIED_BIOLOGY_WORLD: Row = ("WORLD", 574_714.9, 812_085.38, 2_121_009.45);

const SOCIAL_SCIENCES: [Row; 4] = [
    ("IRAN", 7_068.0, 13_124.9, 24_641.9),
    ("CANADA", 22_498.2, 40_039.7, 106_952.0),
    ("BRAZIL", 10_393.6, 28_059.5, 86_408.1),
    ("CHINA", 77_376.1, 51_527.8, 200_841.5),
];
const SOCIAL_SCIENCES_WORLD: Row = ("WORLD", 664_703.2, 894_063.6, 2_866_640.4);

fn show(discipline: &str, rows: &[Row], world: Row) {
    println!("{discipline}");
    println!("  {:<8}{:>7}{:>7}{:>9}{:>9}{:>8}{:>8}", "", "A", "B", "dA", "dB", "ratio", "exact");
    for &(entity, new_ost, old_wos, wos) in rows.iter().chain([&world]) {
        let r = SpecializationRow::from_counts(entity, discipline, new_ost, old_wos, wos, world.1, world.2, world.3)
            .expect("non-empty discipline");
        println!(
            "  {:<8}{:>7.2}{:>7.2}{:>9.2}{:>9.2}{:>8.2}{:>8.3}",
            entity,
            r.a_entity,
            r.b_entity,
            r.a_entity - r.a_world,
            r.b_entity - r.b_world,
            r.rho_approx,
            r.rho_exact
        );
    }
}

fn main() {
    show("03", &APPLIED_BIOLOGY, APPLIED_BIOLOGY_WORLD);
    show("SS", &SOCIAL_SCIENCES, SOCIAL_SCIENCES_WORLD);
}
