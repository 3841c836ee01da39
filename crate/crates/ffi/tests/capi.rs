use std::ffi::CString;
use std::ptr;

use qfs_core::config::GENUS2_EXAMPLE;
use qfs_ffi::*;

fn surface() -> *mut QfsSurface {
    let json = CString::new(GENUS2_EXAMPLE).unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { qfs_surface_from_json(json.as_ptr(), &mut s) }, QfsStatus::Ok);
    assert!(!s.is_null());
    s
}

fn last_error() -> String {
    let mut buf = vec![0 as std::ffi::c_char; 256];
    let n = unsafe { qfs_last_error(buf.as_mut_ptr(), buf.len()) };
    let bytes: Vec<u8> = buf[..n.min(255)].iter().map(|&c| c as u8).collect();
    String::from_utf8(bytes).unwrap()
}

#[test]
fn lifecycle_and_queries() {
    let s = surface();
    let (mut n, mut g) = (0usize, 0usize);
    unsafe {
        assert_eq!(qfs_surface_num_curves(s, &mut n), QfsStatus::Ok);
        assert_eq!(qfs_surface_num_generators(s, &mut g), QfsStatus::Ok);
    }
    assert_eq!((n, g), (3, 4));

    let mut m = [0.0; 8];
    unsafe { assert_eq!(qfs_surface_generator(s, 0, m.as_mut_ptr()), QfsStatus::Ok) };
    let det_re = m[0] * m[6] - m[1] * m[7] - (m[2] * m[4] - m[3] * m[5]);
    assert!((det_re - 1.0).abs() < 1e-10);
    unsafe { assert_eq!(qfs_surface_generator(s, 4, m.as_mut_ptr()), QfsStatus::IndexOutOfRange) };

    let mut r = 1.0;
    unsafe { assert_eq!(qfs_surface_relator_residual(s, &mut r), QfsStatus::Ok) };
    assert!(r < 1e-9);

    let mut lengths = [0.0; 6];
    unsafe { assert_eq!(qfs_surface_lengths(s, lengths.as_mut_ptr(), 6), QfsStatus::Ok) };
    for (k, l) in [2.0, 2.5, 3.0].iter().enumerate() {
        assert!((lengths[2 * k] - l).abs() < 1e-9 && lengths[2 * k + 1].abs() < 1e-9);
    }
    unsafe { assert_eq!(qfs_surface_lengths(s, lengths.as_mut_ptr(), 5), QfsStatus::BufferTooSmall) };
    unsafe { qfs_surface_free(s) };
}

#[test]
fn set_fn_and_gram() {
    let s = surface();
    let l = [2.0, 0.1, 2.5, -0.05, 3.0, 0.08];
    let tau = [0.3, 0.2, -0.4, 0.1, 0.1, -0.15];
    unsafe { assert_eq!(qfs_surface_set_fn(s, l.as_ptr(), tau.as_ptr(), 3), QfsStatus::Ok) };
    let mut lengths = [0.0; 6];
    unsafe { qfs_surface_lengths(s, lengths.as_mut_ptr(), 6) };
    for k in 0..6 {
        assert!((lengths[k] - l[k]).abs() < 1e-9);
    }
    let mut gram = vec![0.0; 72];
    unsafe { assert_eq!(qfs_surface_gram(s, 0.0, gram.as_mut_ptr(), gram.len()), QfsStatus::Ok) };
    // Entry (0, 3) is ω(∂/∂l₁, ∂/∂τ₁).
    assert!(gram[2 * 3] > 0.0);
    let (mut res, mut scale) = (0.0, [0.0; 2]);
    unsafe {
        assert_eq!(qfs_surface_darboux_residual(s, 1e-4, &mut res, scale.as_mut_ptr()), QfsStatus::Ok);
    }
    assert!(res.is_finite() && scale[0] > 0.0);
    unsafe { qfs_surface_free(s) };
}

#[test]
fn errors_are_reported() {
    let bad = CString::new("{\"genus\": 2}").unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { qfs_surface_from_json(bad.as_ptr(), &mut s) }, QfsStatus::InputError);
    assert!(s.is_null());
    assert!(last_error().contains("pants"), "{}", last_error());

    assert_eq!(unsafe { qfs_surface_from_json(ptr::null(), &mut s) }, QfsStatus::NullPointer);
    let mut n = 0usize;
    assert_eq!(unsafe { qfs_surface_num_curves(ptr::null(), &mut n) }, QfsStatus::NullPointer);

    let s = surface();
    let l = [2.0, 3.1412, 2.5, 0.0, 3.0, 0.0];
    let tau = [0.0; 6];
    let status = unsafe { qfs_surface_set_fn(s, l.as_ptr(), tau.as_ptr(), 3) };
    assert_eq!(status, QfsStatus::BranchFailure);
    let neg = [-1.0, 0.0, 2.5, 0.0, 3.0, 0.0];
    assert_eq!(unsafe { qfs_surface_set_fn(s, neg.as_ptr(), tau.as_ptr(), 3) }, QfsStatus::InputError);
    assert_eq!(unsafe { qfs_surface_set_fn(s, neg.as_ptr(), tau.as_ptr(), 2) }, QfsStatus::InputError);
    let mut lengths = [0.0; 6];
    unsafe { qfs_surface_lengths(s, lengths.as_mut_ptr(), 6) };
    assert!((lengths[0] - 2.0).abs() < 1e-9, "failed updates leave the handle unchanged");
    unsafe { qfs_surface_free(s) };
    unsafe { qfs_surface_free(ptr::null_mut()) };
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/qfs.h")).unwrap();
    for name in [
        "qfs_surface_from_json",
        "qfs_surface_free",
        "qfs_surface_set_fn",
        "qfs_surface_gram",
        "qfs_surface_darboux_residual",
        "qfs_last_error",
        "typedef struct QfsSurface QfsSurface",
        "QFS_STATUS_BRANCH_FAILURE",
    ] {
        assert!(header.contains(name), "{name}");
    }
}
