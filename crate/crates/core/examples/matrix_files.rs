//! Matrix file round trip and driving the command-line front end in-process.
//!
//!     cargo run --example matrix_files

use pqinv::cli::{read_matrix, run, write_matrix};
use pqinv::{CMatrix, Complex64};

fn main() {
    let dir = std::env::temp_dir().join(format!("pqinv-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    let path = |name: &str| dir.join(name);

    let m = CMatrix::new(
        2,
        2,
        vec![
            Complex64::new(0.1, -1.0 / 3.0),
            Complex64::new(2.0, 0.0),
            Complex64::new(-0.0, 1e-300),
            Complex64::new(1.0, 0.0),
        ],
    )
    .unwrap();
    write_matrix(&path("m.json"), &m).unwrap();
    let back = read_matrix(&path("m.json")).unwrap();
    println!(
        "{}",
        std::fs::read_to_string(path("m.json")).unwrap().trim()
    );
    println!("bit-identical after round trip: {}", back == m);

    write_matrix(&path("a.json"), &CMatrix::real(&[[0.0, 0.0], [1.0, 0.0]])).unwrap();
    write_matrix(&path("p.json"), &CMatrix::real(&[[1.0, 1.0], [0.0, 0.0]])).unwrap();
    write_matrix(&path("q.json"), &CMatrix::real(&[[1.0, -1.0], [0.0, 0.0]])).unwrap();
    let files: Vec<String> = ["a.json", "p.json", "q.json"]
        .iter()
        .map(|f| path(f).display().to_string())
        .collect();
    for kind in ["2l", "2"] {
        let mut args = vec!["pqinv".to_string(), "compute".into()];
        args.extend(files.iter().cloned());
        args.extend(["--kind".into(), kind.into()]);
        let code = run(args);
        println!("compute --kind {kind}: exit {code}");
    }
    let _ = std::fs::remove_dir_all(&dir);
}
