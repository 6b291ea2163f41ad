//! Every example under examples/ runs as a test.

mod scene_io {
    include!("../examples/scene_io.rs");

    #[test]
    fn runs() {
        run_example().unwrap();
    }
}

mod generate_scenes {
    include!("../examples/generate_scenes.rs");

    #[test]
    fn runs() {
        run_example().unwrap();
    }
}

mod visibility_count {
    include!("../examples/visibility_count.rs");

    #[test]
    fn runs() {
        run_example().unwrap();
    }
}

mod visibility_graph {
    include!("../examples/visibility_graph.rs");

    #[test]
    fn runs() {
        run_example().unwrap();
    }
}

mod arrangement_locate {
    include!("../examples/arrangement_locate.rs");

    #[test]
    fn runs() {
        run_example().unwrap();
    }
}

mod vsp_partition {
    include!("../examples/vsp_partition.rs");

    #[test]
    fn runs() {
        run_example().unwrap();
    }
}

mod relaxed_vsp {
    include!("../examples/relaxed_vsp.rs");

    #[test]
    fn runs() {
        run_example().unwrap();
    }
}

mod sample_sizes {
    include!("../examples/sample_sizes.rs");

    #[test]
    fn runs() {
        run_example().unwrap();
    }
}

mod tradeoff_structure {
    include!("../examples/tradeoff_structure.rs");

    #[test]
    fn runs() {
        run_example().unwrap();
    }
}

mod approx_counter {
    include!("../examples/approx_counter.rs");

    #[test]
    fn runs() {
        run_example().unwrap();
    }
}

mod bench_counts {
    include!("../examples/bench_counts.rs");

    #[test]
    fn runs() {
        run_example().unwrap();
    }
}
