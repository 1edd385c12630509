#include "favar/dic.hpp"

#include "favar/error.hpp"
#include "favar/linalg.hpp"
#include "favar/state_space.hpp"
#include "parallel.hpp"

#include <sstream>

namespace favar {

DicResult dic_from_deviances(const std::vector<double>& deviances, double d_hat) {
    if (deviances.empty()) throw ParameterError("dic: no deviances");
    DicResult r;
    double sum = 0.0;
    for (double d : deviances) sum += d;
    r.d_bar = sum / static_cast<double>(deviances.size());
    r.d_hat = d_hat;
    r.p_d = r.d_bar - r.d_hat;
    r.dic = 2.0 * r.d_bar - r.d_hat;
    r.n_draws_used = static_cast<long>(deviances.size());
    return r;
}

FavarParams posterior_mean(const std::vector<FavarParams>& draws) {
    if (draws.empty()) throw ParameterError("posterior_mean: no draws");
    FavarParams m = draws.front();
    for (std::size_t i = 1; i < draws.size(); ++i) {
        const FavarParams& d = draws[i];
        m.LambdaF += d.LambdaF;
        m.LambdaM += d.LambdaM;
        m.sigma2 += d.sigma2;
        m.A += d.A;
        m.zeta += d.zeta;
        m.SigmaU += d.SigmaU;
    }
    const double inv = 1.0 / static_cast<double>(draws.size());
    m.LambdaF *= inv;
    m.LambdaM *= inv;
    m.sigma2 *= inv;
    m.A *= inv;
    m.zeta *= inv;
    m.SigmaU = linalg::nearest_spd(m.SigmaU * inv, 1e-10);
    // frozen blocks are constant across draws but averaging may perturb them in the last bit
    const int S = m.S();
    m.LambdaF.topRows(S).setIdentity();
    if (m.K() > 0) m.LambdaM.topRows(S).setZero();
    return m;
}

double deviance(const FavarParams& params, const PanelData& data) { return -2.0 * integrated_loglik(params, data); }

DicResult compute_dic(const ChainOutput& chain, const PanelData& data, long min_draws) {
    const auto N = static_cast<long>(chain.draws.size());
    if (N < min_draws) {
        std::ostringstream err;
        err << "compute_dic: " << N << " draws stored, at least " << min_draws << " required";
        throw ParameterError(err.str());
    }
    std::vector<double> dev(static_cast<std::size_t>(N));
    detail::parallel_for(0, N, [&](Index i) {
        try {
            dev[static_cast<std::size_t>(i)] = deviance(chain.draws[static_cast<std::size_t>(i)], data);
        } catch (const FavarError& e) {
            std::ostringstream err;
            err << "compute_dic: draw " << i << ": " << e.what();
            throw NumericalError(err.str());
        }
    });
    return dic_from_deviances(dev, deviance(posterior_mean(chain.draws), data));
}

}  // namespace favar
