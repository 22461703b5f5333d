//! Acceptance criterion 11: identical configuration and seed with
//! --workers 1 produce byte-identical output files.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_blisterlab"))
}

#[test]
fn criterion_11_reproducibility() {
    let dir = std::env::temp_dir().join(format!("blisterlab-acc11-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();

    let mut identical = true;
    let mut detail = Vec::new();

    // JSON pipeline with the minimizer (seeded randomness)
    for (tag, args) in [
        (
            "minimize",
            vec![
                "minimize",
                "--h",
                "0.01",
                "--eta",
                "0.1",
                "--alpha-s",
                "1.0",
                "--theta",
                "0.5",
                "--n",
                "256",
                "--seed",
                "42",
                "--workers",
                "1",
                "--blisters",
                "2",
            ],
        ),
        (
            "sweep",
            vec![
                "sweep",
                "--family",
                "periodic",
                "--vary",
                "eta",
                "--from",
                "1e-3",
                "--to",
                "1e-1",
                "--points",
                "6",
                "--h",
                "1e-4",
                "--alpha-s",
                "0.1",
                "--theta",
                "0.5",
                "--seed",
                "42",
                "--workers",
                "1",
            ],
        ),
        (
            "phase",
            vec![
                "phase",
                "--grid",
                "24x24",
                "--h",
                "1e-5",
                "--theta",
                "0.5",
                "--seed",
                "42",
                "--workers",
                "1",
            ],
        ),
    ] {
        let out_a = dir.join(format!("{tag}-a"));
        let out_b = dir.join(format!("{tag}-b"));
        let run = |path: &std::path::Path| {
            let status = bin()
                .args(&args)
                .arg("--out")
                .arg(path)
                .status()
                .expect("binary runs");
            assert!(status.success(), "{tag} run failed");
        };
        run(&out_a);
        run(&out_b);
        let a = std::fs::read(&out_a).unwrap();
        let b = std::fs::read(&out_b).unwrap();
        let same = a == b;
        identical &= same;
        detail.push(format!(
            "{tag}: {} bytes {}",
            a.len(),
            if same { "identical" } else { "DIFFER" }
        ));
    }

    println!(
        "acceptance 11 reproducibility     {} ({})",
        if identical { "PASS" } else { "FAIL" },
        detail.join(", ")
    );
    std::fs::remove_dir_all(&dir).ok();
    assert!(identical);
}
