use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use jetbracket_ffi::*;

const KDV: &str = "vars x[1], u[1]
evolve u = 6*u*u_x + u_xxx
operator A1 = D_x
operator A2 = D_xxx + 4*u*D_x + 2*u_x
check bivector A1
check bivector A2
check vanishing k=3 vector
";

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    jb_string_free(s);
    out
}

#[test]
fn parse_run_and_report() {
    let text = CString::new(KDV).unwrap();
    unsafe {
        let mut problem = ptr::null_mut();
        let mut err = ptr::null_mut();
        assert_eq!(
            jb_problem_parse(text.as_ptr(), &mut problem, &mut err),
            JbStatus::Ok
        );
        assert!(err.is_null());
        let mut report = ptr::null_mut();
        let status = jb_problem_run(problem, jb_default_seed(), 0, 0, &mut report);
        assert_eq!(status, JbStatus::Ok);
        assert_eq!(jb_report_exit_code(report), 0);
        let json = take(jb_report_json(report));
        assert!(json.contains("\"schema\": \"jetbracket-report/1\""));
        assert!(take(jb_report_text(report)).contains("Hamiltonian pair, automatically compatible"));

        let mut again = ptr::null_mut();
        jb_problem_run(problem, jb_default_seed(), 0, 0, &mut again);
        assert_eq!(take(jb_report_json(again)), json);
        jb_report_free(again);
        jb_report_free(report);
        jb_problem_free(problem);
    }
}

#[test]
fn status_codes() {
    unsafe {
        let mut problem = ptr::null_mut();
        let mut err = ptr::null_mut();
        let bad = CString::new("vars x[1], u[1]\nevolve u = sin(u)").unwrap();
        assert_eq!(
            jb_problem_parse(bad.as_ptr(), &mut problem, &mut err),
            JbStatus::ParseError
        );
        assert!(problem.is_null());
        let msg = take(err);
        assert!(
            msg.starts_with("2:12: non-polynomial right-hand side"),
            "{msg}"
        );

        assert_eq!(
            jb_problem_parse(ptr::null(), &mut problem, ptr::null_mut()),
            JbStatus::NullPointer
        );
        let not_utf8 = [0xffu8, 0xfe, 0];
        assert_eq!(
            jb_problem_parse(not_utf8.as_ptr().cast(), &mut problem, ptr::null_mut()),
            JbStatus::InvalidUtf8
        );

        let transport =
            CString::new("vars x[1], u[1]\nevolve u = u_x\ncheck vanishing k=3 vector").unwrap();
        assert_eq!(
            jb_problem_parse(transport.as_ptr(), &mut problem, ptr::null_mut()),
            JbStatus::Ok
        );
        let mut report = ptr::null_mut();
        assert_eq!(
            jb_problem_run(problem, 1, 1, 10, &mut report),
            JbStatus::CertificateFailure
        );
        assert_eq!(jb_report_exit_code(report), 3);
        jb_report_free(report);
        jb_problem_free(problem);

        let heat =
            CString::new("vars x[1], u[1]\nevolve u = u_xx\noperator B = D_x\ncheck 2form B")
                .unwrap();
        jb_problem_parse(heat.as_ptr(), &mut problem, ptr::null_mut());
        assert_eq!(
            jb_problem_run(problem, 1, 0, 0, &mut report),
            JbStatus::Negative
        );
        jb_report_free(report);
        jb_problem_free(problem);

        assert_eq!(jb_report_exit_code(ptr::null()), -1);
        assert!(jb_report_json(ptr::null()).is_null());
        jb_string_free(ptr::null_mut());
        jb_problem_free(ptr::null_mut());
        jb_report_free(ptr::null_mut());
    }
}

#[test]
fn operator_algebra() {
    unsafe {
        let mut out = ptr::null_mut();
        let input = CString::new("D_x\nu").unwrap();
        assert_eq!(jb_compose(input.as_ptr(), &mut out), JbStatus::Ok);
        assert_eq!(take(out), "u*D_x + u_x\n");
        let input = CString::new("vars x[1], u[2]\n[[D_x, u1], [0, u2*D_xx]]").unwrap();
        assert_eq!(jb_adjoint(input.as_ptr(), &mut out), JbStatus::Ok);
        assert_eq!(
            take(out),
            "[[-D_x, 0], [u1, u2*D_xx + 2*u2_x*D_x + u2_xx]]\n"
        );
        let input = CString::new("u*D_xxx + D_x").unwrap();
        assert_eq!(jb_symbol(input.as_ptr(), &mut out), JbStatus::Ok);
        assert_eq!(take(out), "u*θ^3\n");
        let input = CString::new("D_x*u").unwrap();
        assert_eq!(jb_adjoint(input.as_ptr(), &mut out), JbStatus::ParseError);
        assert!(take(out).contains("rightmost"));
        assert_eq!(
            jb_adjoint(input.as_ptr(), ptr::null_mut()),
            JbStatus::NullPointer
        );
    }
}

#[test]
fn header_declares_the_abi() {
    let header =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/jetbracket.h"))
            .unwrap();
    for name in [
        "jb_problem_parse",
        "jb_problem_run",
        "jb_report_exit_code",
        "jb_report_json",
        "jb_report_text",
        "jb_adjoint",
        "jb_compose",
        "jb_symbol",
        "jb_string_free",
        "jb_problem_free",
        "jb_report_free",
        "typedef struct JbProblem JbProblem;",
        "JB_STATUS_CERTIFICATE_FAILURE = 3",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}

/// Compiles a C program against the generated header and the static library.
#[test]
fn c_program_links_and_runs() {
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap().to_path_buf();
    let lib = profile_dir.join("libjetbracket_ffi.a");
    assert!(
        lib.exists(),
        "static library not found at {}",
        lib.display()
    );
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let out = std::env::temp_dir().join(format!("jetbracket_smoke_{}", std::process::id()));
    let status = Command::new("cc")
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .expect("C compiler available");
    assert!(status.success(), "cc failed");
    let run = Command::new(&out).output().unwrap();
    let _ = std::fs::remove_file(&out);
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stdout)
    );
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
}
