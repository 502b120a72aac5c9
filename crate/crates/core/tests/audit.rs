use lppie::bench::{audit_bytes, render_audit, run_benchmark, ReportFormat, LPPIE};
use lppie::{compress_stream, CodecConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_block(seed: u64) -> Vec<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut data = vec![0u8; 4096];
    rng.fill(data.as_mut_slice());
    data
}

fn with_k(k: u32) -> CodecConfig {
    CodecConfig {
        chunk_digits: k,
        ..CodecConfig::default()
    }
}

#[test]
fn full_sixty_four_digit_chunks_take_two_steps() {
    let audit = audit_bytes(&random_block(1), &with_k(64)).unwrap();
    let (tail, full) = audit.entries.split_last().unwrap();
    assert!(full.iter().all(|e| e.digit_len == 64 && e.r == 2));
    assert!(tail.digit_len <= 64);
}

#[test]
fn eight_digit_chunks_take_one_step() {
    let audit = audit_bytes(&random_block(2), &with_k(8)).unwrap();
    let (_, full) = audit.entries.split_last().unwrap();
    assert!(full.iter().all(|e| e.r == 1));
}

#[test]
fn single_digit_tail_is_stored_directly() {
    // 0x01 0x41 is 321; with k = 2 the chunks are "32" and "1"
    let audit = audit_bytes(&[0x41], &with_k(2)).unwrap();
    let rs: Vec<(usize, u8, usize)> = audit
        .entries
        .iter()
        .map(|e| (e.digit_len, e.r, e.mantissa_len))
        .collect();
    assert_eq!(rs, [(2, 1, rs[0].2), (1, 0, 1)]);
    assert_eq!(audit.r_histogram().get(&0), Some(&1));
}

#[test]
fn aggregates_follow_from_entries() {
    let data = random_block(3);
    let config = with_k(64);
    let audit = audit_bytes(&data, &config).unwrap();
    let n = audit.entries.len() as f64;
    let digits: usize = audit.entries.iter().map(|e| e.digit_len).sum();
    let stored: usize = audit.entries.iter().map(|e| e.mantissa_len).sum();
    assert!((audit.mean_digit_len() - digits as f64 / n).abs() < 1e-12);
    assert!((audit.mean_mantissa_len() - stored as f64 / n).abs() < 1e-12);
    assert_eq!(audit.r_histogram().values().sum::<usize>(), audit.entries.len());
    assert_eq!(
        audit.container_size,
        compress_stream(&data, &config).unwrap().len() as u64
    );
    assert_eq!(audit.mantissa_bytes() + audit.overhead_bytes(), audit.container_size);
    assert!(audit.mean_mantissa_len() >= audit.mean_digit_len() - 2.0);

    let csv = render_audit(&audit, ReportFormat::Csv);
    assert_eq!(csv.lines().count(), audit.entries.len() + 1);
}

#[test]
fn lppie_row_present_without_external_tools() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.bin");
    std::fs::write(&input, random_block(4)).unwrap();
    let report = run_benchmark(&input, &[], &CodecConfig::default()).unwrap();
    assert_eq!(report.rows.len(), 1);
    assert_eq!(report.rows[0].method, LPPIE);
    assert!(report.ratio(&report.rows[0]).unwrap() > 1.0);
    assert!(report.rows[0].seconds >= 0.0);
}
