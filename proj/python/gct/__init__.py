"""Graph correspondence transfer toolkit.

Patch-wise graph matching with outlier regularization, pose-pair reference
selection through random-forest leaf proximity, and correspondence-transfer
ranking with a learned pair metric.
"""

from gct._core import (  # noqa: F401
    AffinityMatrix,
    Assignment,
    AttributeGraph,
    CmcCurve,
    Correspondence,
    CorrespondenceTemplate,
    DescriptorConfig,
    DistanceMode,
    ExperimentConfig,
    ForestConfig,
    GridConfig,
    HogConfig,
    MetricModel,
    OrientationForest,
    PairMatchResult,
    PatchGrid,
    PcaModel,
    PosePair,
    RankedList,
    SynthConfig,
    affinity_from_dense,
    apply_pca,
    build_affinity,
    build_graph,
    candidate_pairs,
    compute_cmc,
    decompose,
    edge_affinity,
    extract_hog,
    extract_patch_descriptor,
    fit_kissme,
    fit_pca,
    image_descriptors,
    leaf_proximity,
    match_graphs,
    metric_distance,
    node_affinity,
    objective,
    pair_distance,
    pose_pair_similarity,
    run_experiment,
    select_references,
    solve_bruteforce,
    solve_greedy,
    synth_generate,
    train_forest,
)

__version__ = "0.1.0"
