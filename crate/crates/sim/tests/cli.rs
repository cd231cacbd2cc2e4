use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_polar-rsma"))
}

#[test]
fn analytic_exits_zero_with_eight_values() {
    let o = bin().arg("analytic").output().unwrap();
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 9);
}

#[test]
fn sweep_output_is_byte_identical_across_thread_counts() {
    let run = |threads: &str| {
        let o = bin()
            .args(["sweep", "--preset", "fig4b", "--trials", "300"])
            .env("POLAR_RSMA_THREADS", threads)
            .output()
            .unwrap();
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        o.stdout
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn bad_input_exits_two_with_machine_readable_line() {
    let o = bin().args(["simulate", "--preset", "nope"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.starts_with("error kind=usage message=\""), "{err}");
}
