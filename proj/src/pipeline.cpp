#include "fegraph/pipeline.hpp"

#include "fegraph/errors.hpp"
#include "fegraph/matrix_io.hpp"
#include "fegraph/rng.hpp"

namespace fegraph {

PipelineResult run_pipeline(const Graph& g, const PipelineOptions& opts, std::uint64_t seed) {
    PipelineResult res;
    switch (opts.source) {
    case SimilaritySource::FE: {
        std::vector<int> targets;
        if (opts.targets > 0 && opts.targets < g.n)
            targets = sample_targets(g.n, opts.targets, derive_seed(seed, 0));
        else {
            targets.resize(g.n);
            for (int i = 0; i < g.n; ++i)
                targets[i] = i;
        }
        DissimilarityMatrix phi = fe_directed(g, opts.fe, targets, opts.threads);
        if (phi.values.rows() == phi.values.cols())
            phi = symmetrize(phi);
        res.similarity = to_similarity(phi, opts.percentile, opts.max_target);
        break;
    }
    case SimilaritySource::DeepWalk:
        res.similarity =
            deepwalk_similarity(g, opts.window, opts.negatives, opts.dense_cap);
        break;
    case SimilaritySource::External: {
        if (opts.external_path.empty())
            throw ValidationError("pipeline: external similarity needs a matrix path");
        res.similarity.values = read_matrix_binary(opts.external_path);
        res.similarity.source = SimilaritySource::External;
        if (res.similarity.values.rows() != g.n)
            throw ValidationError("pipeline: external similarity rows != graph nodes");
        break;
    }
    }

    const PosNegWeights w = pos_neg_from_similarity(res.similarity);
    FitOptions fit = opts.fit;
    fit.seed = derive_seed(seed, 1);
    // Tied symmetric factorization only makes sense for a square symmetric
    // similarity; sampled-target matrices fall back to untied factors.
    if (w.s_plus.rows() != w.s_plus.cols())
        fit.symmetric = false;
    res.fit = gmf_fit(w, fit);
    return res;
}

Eigen::MatrixXd embed_graph(const Graph& g, const PipelineOptions& opts, std::uint64_t seed) {
    return run_pipeline(g, opts, seed).fit.embedding.U;
}

} // namespace fegraph
