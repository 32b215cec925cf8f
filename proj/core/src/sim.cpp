/*
 Copyright 2026 The lqgsi Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#include "lqgsi/sim.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

#include "lqgsi/error.hpp"
#include "lqgsi/kalman.hpp"
#include "lqgsi/rng.hpp"

namespace lqgsi {

namespace {

constexpr double kDivergenceNorm = 1e12;

/// Mergeable running mean and variance (Chan et al.).
struct Moments {
  long count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }
  void merge(const Moments& o) {
    if (o.count == 0) return;
    const long total = count + o.count;
    const double delta = o.mean - mean;
    mean += delta * static_cast<double>(o.count) / static_cast<double>(total);
    m2 += o.m2 + delta * delta * static_cast<double>(count) * static_cast<double>(o.count) /
                     static_cast<double>(total);
    count = total;
  }
};

struct BatchStats {
  Moments cost;  // per-step cost (stationary) or per-episode cost (finite)
  Mat err_sum;
  long err_count = 0;
  double norm_sum = 0.0;
  double norm_max = 0.0;
  Vec lag_cross, lag_head, lag_tail;
};

struct StepData {
  const Mat* A;
  const Mat* B;
  const Mat* C;
  const Mat* Q;
  const Mat* R;
  Mat W_sqrt;
  Mat V_sqrt;
  const PolicyStep* policy;
};

class Runner {
 public:
  Runner(const SystemModel& model, const Policy& policy, const SimConfig& cfg)
      : model_(model), policy_(policy), cfg_(cfg) {
    const int horizon = policy.stationary ? 1 : static_cast<int>(policy.steps.size());
    for (int t = 0; t < horizon; ++t) {
      StepData d;
      d.A = &model.A_at(t);
      d.B = &model.B_at(t);
      d.C = &model.C_at(t);
      d.Q = &policy.cost.Q_at(t);
      d.R = &policy.cost.R_at(t);
      d.W_sqrt = linalg::sqrt_psd(model.W_at(t));
      d.V_sqrt = model.p() > 0 ? linalg::sqrt_psd(model.V_at(t)) : Mat(0, 0);
      d.policy = &policy.step(t);
      innov_dim_ = std::max(innov_dim_, static_cast<int>(d.C->rows() + d.policy->encoder.q()));
      steps_.push_back(std::move(d));
    }
    P1_sqrt_ = linalg::sqrt_psd(model.P_init);
  }

  long steps_per_batch() const {
    if (!policy_.stationary) return static_cast<long>(steps_.size());
    const long body = cfg_.steps - cfg_.burn_in;
    return cfg_.burn_in + (body + cfg_.batches - 1) / cfg_.batches;
  }

  BatchStats run_batch(int batch) const {
    const auto b = static_cast<std::uint64_t>(batch);
    CounterRng rw(cfg_.seed, stream_id(b, NoiseKind::Process));
    CounterRng rv(cfg_.seed, stream_id(b, NoiseKind::Observation));
    CounterRng rm(cfg_.seed, stream_id(b, NoiseKind::Encoder));
    CounterRng rx(cfg_.seed, stream_id(b, NoiseKind::Initial));

    const int n = model_.n();
    BatchStats st;
    st.err_sum = Mat::Zero(n, n);
    st.lag_cross = Vec::Zero(innov_dim_);
    st.lag_head = Vec::Zero(innov_dim_);
    st.lag_tail = Vec::Zero(innov_dim_);
    std::ostream* traj = batch == 0 ? cfg_.trajectory : nullptr;
    if (traj) write_header(*traj);

    const long episodes = policy_.stationary ? 1 : cfg_.episodes_per_batch;
    const long length = steps_per_batch();
    const long burn = policy_.stationary ? cfg_.burn_in : 0;
    long row = 0;
    for (long ep = 0; ep < episodes; ++ep) {
      Vec x(n);
      rx.fill_gaussian(x);
      x = P1_sqrt_ * x;
      FilterState fs;
      Vec u_prev;
      Vec prev_innov;
      double episode_cost = 0.0;
      for (long t = 0; t < length; ++t, ++row) {
        const StepData& d = data(t);
        const PolicyStep& ps = *d.policy;
        Vec y = *d.C * x;
        if (y.size() > 0) {
          Vec v(y.size());
          rv.fill_gaussian(v);
          y.noalias() += d.V_sqrt * v;
        }
        Vec f = ps.encoder.D * x;
        if (f.size() > 0) {
          Vec m(f.size());
          rm.fill_gaussian(m);
          f += m;  // M = I
        }
        if (t == 0) {
          fs = measurement_update(Vec::Zero(n), *d.C, ps.encoder.D, ps.L, y, f);
        } else {
          const StepData& prev = data(t - 1);
          fs = filter_step(fs, {*prev.A, *prev.B, *d.C, ps.encoder.D, ps.L}, y, f, u_prev);
        }
        const Vec u = -ps.K * fs.xhat;
        Vec w(n);
        rw.fill_gaussian(w);
        Vec x_next = *d.A * x + *d.B * u + d.W_sqrt * w;
        const double norm = x_next.norm();
        if (!(norm <= kDivergenceNorm)) {
          std::ostringstream msg;
          msg << "closed loop diverged at step " << t << " of batch " << batch
              << " (|x| = " << norm << ")";
          throw Divergence(msg.str());
        }
        const double c = x_next.dot(*d.Q * x_next) + u.dot(*d.R * u);
        if (traj) write_row(*traj, row, x, u, c);

        if (t >= burn) {
          if (policy_.stationary) st.cost.add(c);
          episode_cost += c;
          const Vec e = x - fs.xhat;
          st.err_sum.noalias() += e * e.transpose();
          ++st.err_count;
          st.norm_sum += norm;
          st.norm_max = std::max(st.norm_max, norm);
          if (prev_innov.size() > 0 && prev_innov.size() == fs.innovation.size()) {
            const Eigen::Index k = fs.innovation.size();
            st.lag_cross.head(k) += prev_innov.cwiseProduct(fs.innovation);
            st.lag_head.head(k) += prev_innov.cwiseAbs2();
            st.lag_tail.head(k) += fs.innovation.cwiseAbs2();
          }
          prev_innov = fs.innovation;
        }
        u_prev = u;
        x = std::move(x_next);
      }
      if (!policy_.stationary) st.cost.add(episode_cost);
    }
    return st;
  }

 private:
  const StepData& data(long t) const {
    return steps_[policy_.stationary ? 0 : static_cast<std::size_t>(t)];
  }

  void write_header(std::ostream& os) const {
    os << "t";
    for (int i = 0; i < model_.n(); ++i) os << ",x" << i;
    for (int i = 0; i < model_.m(); ++i) os << ",u" << i;
    os << ",cost\n";
  }

  static void write_row(std::ostream& os, long t, const Vec& x, const Vec& u, double c) {
    os << t;
    for (Eigen::Index i = 0; i < x.size(); ++i) os << ',' << x(i);
    for (Eigen::Index i = 0; i < u.size(); ++i) os << ',' << u(i);
    os << ',' << c << '\n';
  }

  const SystemModel& model_;
  const Policy& policy_;
  const SimConfig& cfg_;
  std::vector<StepData> steps_;
  Mat P1_sqrt_;
  int innov_dim_ = 0;
};

void check_config(const SystemModel& model, const Policy& policy, const SimConfig& cfg) {
  if (cfg.batches < 1) throw InvalidModel("simulate: batches must be >= 1");
  if (cfg.threads < 1) throw InvalidModel("simulate: threads must be >= 1");
  if (policy.steps.empty()) throw InvalidModel("simulate: policy has no steps");
  if (policy.cost.Q.empty() || policy.cost.R.empty()) {
    throw InvalidModel("simulate: policy carries no cost weights");
  }
  if (policy.stationary) {
    if (!model.horizon.is_infinite()) {
      throw InvalidModel("simulate: stationary policy needs an infinite-horizon model");
    }
    if (cfg.steps < 1 || cfg.burn_in < 0 || cfg.burn_in >= cfg.steps) {
      throw InvalidModel("simulate: need steps >= 1 and 0 <= burn_in < steps");
    }
    if (!(policy.closed_loop_radius < 1.0)) {
      throw InvalidModel("simulate: stationary policy lacks a stability certificate");
    }
  } else {
    if (model.horizon.steps() != static_cast<int>(policy.steps.size()) ||
        cfg.steps != static_cast<long>(policy.steps.size())) {
      throw InvalidModel("simulate: finite-horizon policy requires steps = T");
    }
    if (cfg.episodes_per_batch < 1) {
      throw InvalidModel("simulate: episodes_per_batch must be >= 1");
    }
  }
}

}  // namespace

SimReport simulate(const SystemModel& model, const Policy& policy, const SimConfig& cfg) {
  check_config(model, policy, cfg);
  const Runner runner(model, policy, cfg);

  std::vector<BatchStats> stats(static_cast<std::size_t>(cfg.batches));
  std::vector<std::exception_ptr> errors(stats.size());
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int b = next++; b < cfg.batches; b = next++) {
      try {
        stats[static_cast<std::size_t>(b)] = runner.run_batch(b);
      } catch (...) {
        errors[static_cast<std::size_t>(b)] = std::current_exception();
      }
    }
  };
  const int threads = std::min(cfg.threads, cfg.batches);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  // Merge in batch order so the result does not depend on scheduling.
  SimReport rep;
  rep.stationary = policy.stationary;
  rep.seed = cfg.seed;
  rep.steps_per_batch = runner.steps_per_batch();
  const int n = model.n();
  Moments cost;
  Mat err = Mat::Zero(n, n);
  long err_count = 0;
  double norm_sum = 0.0;
  Vec cross, head, tail;
  for (const auto& st : stats) {
    cost.merge(st.cost);
    rep.batch_means.push_back(st.cost.mean);
    err += st.err_sum;
    err_count += st.err_count;
    norm_sum += st.norm_sum;
    rep.state_norm_max = std::max(rep.state_norm_max, st.norm_max);
    if (cross.size() == 0) {
      cross = st.lag_cross;
      head = st.lag_head;
      tail = st.lag_tail;
    } else {
      cross += st.lag_cross;
      head += st.lag_head;
      tail += st.lag_tail;
    }
  }
  rep.avg_cost = cost.mean;
  rep.recorded_steps = err_count;
  rep.error_covariance = err_count > 0 ? Mat(linalg::symmetrize(err / static_cast<double>(err_count)))
                                       : Mat::Zero(n, n);
  rep.state_norm_mean = err_count > 0 ? norm_sum / static_cast<double>(err_count) : 0.0;
  if (cfg.batches > 1) {
    Moments bm;
    for (double v : rep.batch_means) bm.add(v);
    rep.cost_stderr = std::sqrt(bm.m2 / static_cast<double>(cfg.batches - 1)) /
                      std::sqrt(static_cast<double>(cfg.batches));
  }
  for (Eigen::Index k = 0; k < cross.size(); ++k) {
    const double denom = std::sqrt(head(k) * tail(k));
    if (denom > 0.0) {
      rep.innovation_lag1_corr = std::max(rep.innovation_lag1_corr, std::abs(cross(k)) / denom);
    }
  }

  rep.predicted_cost = policy.predicted_cost;
  if (policy.stationary) {
    rep.predicted_P = policy.steps.front().P_post;
  } else {
    rep.predicted_P = Mat::Zero(n, n);
    for (const auto& s : policy.steps) rep.predicted_P += s.P_post;
    rep.predicted_P /= static_cast<double>(policy.steps.size());
  }
  for (const auto& s : policy.steps) rep.q = std::max(rep.q, s.encoder.q());
  return rep;
}

double empirical_rate(const SystemModel& model, const Policy& policy, int max_steps) {
  if (!policy.stationary) throw InvalidModel("empirical_rate needs a stationary policy");
  const PolicyStep& ps = policy.steps.front();
  const Mat snrY = snr_matrix(model.C_at(0), model.V_at(0));
  const Mat snrF = linalg::symmetrize(ps.encoder.D.transpose() * ps.encoder.D);
  Mat pred = linalg::symmetrize(model.P_init);
  for (int k = 0; k < max_steps; ++k) {
    const Mat plus = incorporate(pred, snrY);
    const Mat post = incorporate(plus, snrF);
    const Mat next = predict(post, model.A_at(0), model.W_at(0));
    const double change = (next - pred).norm();
    pred = next;
    if (!pred.allFinite()) break;
    if (change <= 1e-12 * (1.0 + pred.norm())) return step_info_nats(incorporate(pred, snrY), snrF);
  }
  throw NumericalError("empirical_rate: filter covariance recursion did not settle");
}

}  // namespace lqgsi
