use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use rcvf_bench::{ball, polynomial};
use rcvf_core::certificates::{
    check_general_characterization, generate_ball_certificate, verify_nonneg_certificate, GenerationBudget,
    GenerationOutcome,
};
use rcvf_core::sos::{residue_sos_search, ResiduePolynomial, SosBudget};
use rcvf_core::SampleConfig;

fn sos(c: &mut Criterion) {
    let q = ResiduePolynomial::from_polynomial(&polynomial("x^4 + 2*x^2*y^2 + 3*y^4 - 2*x*y + 1")).unwrap();
    c.bench_function("residue sos search", |bn| bn.iter(|| residue_sos_search(black_box(&q), &SosBudget::default())));
}

fn certificates(c: &mut Criterion) {
    let budget = GenerationBudget::default();
    let set = ball(2);
    let p = polynomial("x^2 + 2*x + 3 + eps*y");
    c.bench_function("generate certificate", |bn| {
        bn.iter(|| generate_ball_certificate(black_box(&p), &set, &budget).unwrap())
    });
    let GenerationOutcome::Certificate(cert) = generate_ball_certificate(&p, &set, &budget).unwrap() else {
        panic!("expected a certificate");
    };
    c.bench_function("verify certificate", |bn| bn.iter(|| verify_nonneg_certificate(black_box(&p), &cert, &set)));
    let q = polynomial("x^2 - 2");
    let one = ball(1);
    let config = SampleConfig::with_seed(5).samples(100);
    c.bench_function("characterization probe", |bn| {
        bn.iter(|| check_general_characterization(black_box(&q), &one, &config).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = sos, certificates
}
criterion_main!(benches);
