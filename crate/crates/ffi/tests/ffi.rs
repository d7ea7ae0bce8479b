use std::f64::consts::PI;
use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use qec_esd_ffi::*;

fn last_error() -> String {
    let mut buf = [0 as c_char; 256];
    unsafe {
        qec_last_error_message(buf.as_mut_ptr(), buf.len());
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

fn scenario(channel: QecChannel, code: QecCodeKind, p: f64, kappa: f64) -> *mut QecScenario {
    unsafe {
        let mut sc = ptr::null_mut();
        assert_eq!(
            qec_scenario_new(channel as u32, code as u32, p, kappa, &mut sc),
            QecStatus::Ok
        );
        assert!(!sc.is_null());
        sc
    }
}

#[test]
fn metrics_through_the_abi() {
    unsafe {
        let sc = scenario(QecChannel::Ad, QecCodeKind::None, 0.5, 1.0);
        let (mut c, mut f) = (0.0, 0.0);
        assert_eq!(
            qec_pair_metrics(sc, QecFamily::Phi as u32, PI / 4.0, &mut c, &mut f),
            QecStatus::Ok
        );
        assert!((c - 0.25).abs() < 1e-12);
        // 1 - 2p cos^2 a + p^2 cos^2 a at a = pi/4, p = 1/2.
        assert!((f - 0.625).abs() < 1e-12);

        let mut rho = [0.0; 32];
        assert_eq!(
            qec_evolve_pair(sc, QecFamily::Phi as u32, PI / 4.0, rho.as_mut_ptr()),
            QecStatus::Ok
        );
        let trace: f64 = (0..4).map(|i| rho[2 * (5 * i)]).sum();
        assert!((trace - 1.0).abs() < 1e-12);
        let mut c2 = 0.0;
        assert_eq!(qec_concurrence(rho.as_ptr(), &mut c2), QecStatus::Ok);
        assert!((c2 - c).abs() < 1e-12);
        qec_scenario_free(sc);
    }
}

#[test]
fn onsets() {
    unsafe {
        let sc = scenario(QecChannel::Ad, QecCodeKind::None, 0.0, 1.0);
        let (mut p, mut found) = (0.0, false);
        assert_eq!(
            qec_onset_numeric(sc, QecFamily::Phi as u32, PI / 8.0, &mut p, &mut found),
            QecStatus::Ok
        );
        assert!(found);
        assert!((p - (PI / 8.0).tan()).abs() < 1e-5);
        qec_scenario_free(sc);

        let status = qec_onset_analytic(
            QecFamily::Phi as u32,
            QecChannel::Combined as u32,
            PI / 8.0,
            2.0,
            &mut p,
            &mut found,
        );
        assert_eq!(status, QecStatus::Ok);
        assert!(found);
        assert!((p / (1.0 - p).powi(2) - (PI / 8.0).tan()).abs() < 1e-9);

        assert_eq!(
            qec_onset_analytic(
                QecFamily::Psi as u32,
                QecChannel::Ad as u32,
                0.3,
                1.0,
                &mut p,
                &mut found
            ),
            QecStatus::Ok
        );
        assert!(!found);
        assert!(p.is_nan());
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut sc = ptr::null_mut();
        assert_eq!(
            qec_scenario_new(0, 0, 2.0, 1.0, &mut sc),
            QecStatus::InvalidArgument
        );
        assert!(sc.is_null());
        assert!(last_error().contains('2'), "{}", last_error());

        assert_eq!(
            qec_scenario_new(9, 0, 0.5, 1.0, &mut sc),
            QecStatus::InvalidArgument
        );
        assert!(last_error().contains("channel"));
        assert_eq!(
            qec_scenario_new(0, 9, 0.5, 1.0, &mut sc),
            QecStatus::InvalidArgument
        );
        assert_eq!(
            qec_scenario_new(0, 0, 0.5, 1.0, ptr::null_mut()),
            QecStatus::NullPointer
        );

        let mut c = 0.0;
        assert_eq!(
            qec_pair_metrics(ptr::null(), 0, 0.3, &mut c, ptr::null_mut()),
            QecStatus::NullPointer
        );
        assert_eq!(qec_concurrence(ptr::null(), &mut c), QecStatus::NullPointer);

        let mut bad = [0.0; 32];
        bad[0] = 1.5;
        bad[10] = -0.5;
        assert_eq!(qec_concurrence(bad.as_ptr(), &mut c), QecStatus::Compute);

        // A success clears the message.
        let ok = scenario(QecChannel::Pd, QecCodeKind::Phase3, 0.1, 1.0);
        assert_eq!(last_error(), "");
        qec_scenario_free(ok);
        qec_scenario_free(ptr::null_mut());
    }
}

#[test]
fn truncated_error_message() {
    unsafe {
        let mut sc = ptr::null_mut();
        qec_scenario_new(0, 0, -1.0, 1.0, &mut sc);
        let mut buf = [0x7f as c_char; 8];
        let full = qec_last_error_message(buf.as_mut_ptr(), buf.len());
        assert!(full > 7);
        assert_eq!(buf[7], 0);
        assert_eq!(qec_last_error_message(ptr::null_mut(), 0), full);
    }
}

#[test]
fn sweep_handle() {
    unsafe {
        let mut sw = ptr::null_mut();
        let status = qec_sweep_run(
            QecChannel::Ad as u32,
            QecFamily::Phi as u32,
            PI / 4.0,
            1.0,
            QecCodeKind::Leung4 as u32,
            5,
            &mut sw,
        );
        assert_eq!(status, QecStatus::Ok);
        assert_eq!(qec_sweep_len(sw), 5);
        let mut rec = QecSweepRecord::default();
        assert_eq!(qec_sweep_get(sw, 2, &mut rec), QecStatus::Ok);
        assert_eq!(rec.p, 0.5);
        assert!((rec.c_unc - 0.25).abs() < 1e-12);
        assert_eq!(rec.c_cor, 0.0);
        assert_eq!(qec_sweep_get(sw, 5, &mut rec), QecStatus::InvalidArgument);

        let dir = tempfile::tempdir().unwrap();
        let csv = dir.path().join("out.csv");
        let path = CString::new(csv.to_str().unwrap()).unwrap();
        assert_eq!(qec_sweep_write(sw, path.as_ptr(), false), QecStatus::Ok);
        let text = std::fs::read_to_string(&csv).unwrap();
        assert!(text.contains("p,c_unc,c_cor,f_unc,f_cor\n"));
        assert!(text.contains("\n0.5,0.25,0,"));

        std::fs::write(dir.path().join("file"), "x").unwrap();
        let blocked = CString::new(dir.path().join("file/out.json").to_str().unwrap()).unwrap();
        assert_eq!(qec_sweep_write(sw, blocked.as_ptr(), true), QecStatus::Io);
        qec_sweep_free(sw);

        assert_eq!(qec_sweep_len(ptr::null()), 0);
        assert_eq!(
            qec_sweep_run(0, 0, PI / 4.0, 1.0, 1, 1, &mut sw),
            QecStatus::InvalidArgument
        );
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(qec_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

/// The generated header compiles as C99 and C++ against a program that calls
/// every entry point.
#[test]
fn header_compiles() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let include = root.join("include");
    let source = root.join("tests").join("c").join("smoke.c");
    assert!(include.join("qec_esd.h").exists());
    for (compiler, std) in [("cc", "-std=c99"), ("c++", "-std=c++17")] {
        let mut cmd = Command::new(compiler);
        if compiler == "c++" {
            cmd.args(["-x", "c++"]);
        }
        let out = match cmd
            .args([std, "-Wall", "-Wextra", "-Werror", "-fsyntax-only", "-I"])
            .arg(&include)
            .arg(&source)
            .output()
        {
            Ok(out) => out,
            Err(e) => {
                eprintln!("skipping {compiler}: {e}");
                continue;
            }
        };
        assert!(
            out.status.success(),
            "{compiler}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}
