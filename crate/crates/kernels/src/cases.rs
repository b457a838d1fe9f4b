use gaussrep_measures::{ex_011_11, MeasureSpec, RowGen, SeqGen};

use crate::{KernelKind, KernelSpec, Phase, Result};

/// A measure paired with one kernel, for residual-vs-criterion trend checks.
#[derive(Debug, Clone)]
pub struct DualityCase {
    pub name: &'static str,
    pub spec: MeasureSpec,
    pub kernel: KernelSpec,
    /// Whether the criterion grows without bound on this family.
    pub divergent: bool,
}

fn unit_rows(a: [SeqGen; 3]) -> Vec<RowGen> {
    a.into_iter().map(|a| RowGen { b: SeqGen::constant(1.0), a }).collect()
}

fn signs() -> SeqGen {
    SeqGen::Alternating { even: 1.0, odd: -1.0 }
}

/// Five b ≡ 1 families on which the criterion diverges, then the bounded
/// (1, |n|, |n|) example with the pair kernel.
pub fn duality_cases(window: usize, truncation: usize) -> Result<Vec<DualityCase>> {
    let grow_first = MeasureSpec::from_generators(window, &unit_rows([SeqGen::power(1.0), SeqGen::constant(1.0), signs()]))?;
    let root_second = MeasureSpec::from_generators(window, &unit_rows([SeqGen::constant(1.0), SeqGen::power(0.5), SeqGen::constant(0.0)]))?;
    let grow_third = MeasureSpec::from_generators(window, &unit_rows([SeqGen::constant(1.0), signs(), SeqGen::power(1.0)]))?;
    let small_phase = Phase::Constant { value: 0.01 };
    let case = |name, spec: &MeasureSpec, kernel: KernelSpec, divergent| DualityCase {
        name,
        spec: spec.clone(),
        kernel: kernel.with_truncation(truncation),
        divergent,
    };
    Ok(vec![
        case("D_by_A growing row 1", &grow_first, KernelSpec::new(KernelKind::DByA, 1, 0, truncation), true),
        case("D_by_XA growing row 1", &grow_first, KernelSpec::new(KernelKind::DByXa, 1, 0, truncation), true),
        case("X_from_pairs root row 2", &root_second, KernelSpec::new(KernelKind::XFromPairs, 2, 0, truncation), true),
        case(
            "D_by_expA growing row 3",
            &grow_third,
            KernelSpec::new(KernelKind::DByExpA, 3, 0, truncation).with_phase(small_phase.clone()),
            true,
        ),
        case(
            "D_by_cosA growing row 3",
            &grow_third,
            KernelSpec::new(KernelKind::DByCosA, 3, 0, truncation).with_phase(small_phase),
            true,
        ),
        case(
            "XX_by_AA on (1,|n|,|n|)",
            &ex_011_11(window)?,
            KernelSpec::new(KernelKind::XxByAa, 2, 1, truncation).with_partner(2),
            false,
        ),
    ])
}
