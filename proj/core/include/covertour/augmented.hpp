#pragma once

#include <memory>
#include <vector>

#include "covertour/classic.hpp"
#include "covertour/policy.hpp"

namespace covertour {

/// Common surface of the prediction-following strategies so the trust
/// wrappers can keep one dormant during their early phases: releases and
/// serves are observed for bookkeeping only until activate() takes over.
class PredictReplanBase : public OnlinePolicy {
 public:
  virtual void observe_release(Controller& c, int i) = 0;
  virtual void observe_serve(Controller& c, int i) = 0;
  virtual void activate(Controller& c) = 0;
};

/// Follows a fastest tour over the predicted requests; on every unexpected
/// release, recomputes a fastest tour from the current position over all
/// unserved predicted and unexpected requests. Practical mode drops predicted
/// requests already known absent: it wakes at predicted release dates so a
/// no-show is noticed and abandoned right away, not at the next release. On
/// Dial-a-Ride instances recomputation is deferred until the server capacity
/// is empty.
class PredictReplanPolicy : public PredictReplanBase {
 public:
  explicit PredictReplanPolicy(PredictionSet pred, bool practical = true,
                               SolverKind solver = SolverKind::Exact, double nu = 2.0);
  std::string name() const override { return "predict_replan"; }
  void start(Controller& c) override;
  void on_release(Controller& c, int i) override;
  void on_wake(Controller& c, int tag) override;
  void on_step_complete(Controller& c, const PlanStep& s) override;
  void on_serve(Controller& c, int i) override;

  void observe_release(Controller& c, int i) override;
  void observe_serve(Controller& c, int i) override;
  void activate(Controller& c) override;

 private:
  void note_release(Controller& c, int i, bool active);
  void recompute(Controller& c);
  void reissue(Controller& c);
  bool known_absent(int j, double now) const;
  void arm_absence(Controller& c);

  PredictionSet pred_;
  bool practical_;
  SolverKind solver_;
  double nu_;

  bool active_ = false;
  bool pending_ = false;  // Dial-a-Ride recompute deferred while loaded
  std::vector<char> pred_dropped_;  // excluded as known absent
  std::vector<char> pred_served_;
  std::vector<int> pred_match_;    // predicted j -> matched actual, -1
  std::vector<int> actual_match_;  // actual i -> matched predicted, -1
  std::vector<int> unexpected_;    // released actual with no match
  std::vector<PlanStep> remaining_;
  std::vector<int> serve_;
};

/// Delay framework: phase (i) follows the subroutine while
/// t <= alpha * C-hat - d(p(t), o), phase (ii) returns the server to the
/// origin, phase (iii) follows PredictReplan. With the approximate solver the
/// phase conditions use the approximate prediction tour length C-tilde and
/// phase (iii) is the polynomial PredictReplan variant.
class DelayTrustPolicy : public OnlinePolicy {
 public:
  DelayTrustPolicy(PredictionSet pred, double alpha, std::unique_ptr<OnlinePolicy> sub,
                   SolverKind solver = SolverKind::Exact, double nu = 2.0, bool practical = true);
  ~DelayTrustPolicy() override;
  std::string name() const override { return "delay_trust"; }
  double certified_ratio() const override;
  void start(Controller& c) override;
  void on_release(Controller& c, int i) override;
  void on_wake(Controller& c, int tag) override;
  void on_plan_complete(Controller& c) override;
  void on_step_complete(Controller& c, const PlanStep& s) override;
  void on_serve(Controller& c, int i) override;

  double chat() const { return chat_; }

 private:
  struct Proxy;
  void arm_boundary(Controller& c);
  void enter_phase2(Controller& c);
  void enter_phase3(Controller& c);

  PredictionSet pred_;
  double alpha_;
  std::unique_ptr<OnlinePolicy> sub_;
  SolverKind solver_;
  double nu_;
  std::unique_ptr<PredictReplanBase> pr_;
  std::unique_ptr<Proxy> proxy_;

  int phase_ = 1;
  double chat_ = 0.0;
  double bound_ = 0.0;
  double tv_ = 0.0;       // armed boundary-violation time
  Plan sub_plan_;         // last plan issued by the subroutine
  size_t sub_cursor_ = 0; // completed steps of that plan
};

/// SmartStart with stopping criteria: a departure decision with
/// t + l(S) > alpha * C-hat triggers phase (ii) (wait at the origin until at
/// least alpha * C-hat / 2); sleeping or idling at alpha * C-hat triggers
/// phase (iii) (PredictReplan).
class SmartTrustPolicy : public OnlinePolicy {
 public:
  SmartTrustPolicy(PredictionSet pred, double alpha, SolverKind solver = SolverKind::Exact,
                   double nu = 2.0, bool practical = true);
  ~SmartTrustPolicy() override;
  std::string name() const override { return "smart_trust"; }
  double certified_ratio() const override;
  void start(Controller& c) override;
  void on_release(Controller& c, int i) override;
  void on_wake(Controller& c, int tag) override;
  void on_plan_complete(Controller& c) override;
  void on_step_complete(Controller& c, const PlanStep& s) override;
  void on_serve(Controller& c, int i) override;

  double chat() const { return chat_; }

 private:
  struct Proxy;
  void enter_phase2(Controller& c);
  void enter_phase3(Controller& c);

  PredictionSet pred_;
  double alpha_;
  SolverKind solver_;
  double nu_;
  SmartStartPolicy sub_;
  std::unique_ptr<PredictReplanBase> pr_;
  std::unique_ptr<Proxy> proxy_;

  int phase_ = 1;
  double chat_ = 0.0;
  bool pending2_ = false;  // vetoed departure awaiting the phase switch
};

/// Polynomial PredictReplan: follows a (1 + nu)-approximate tour on the
/// predicted requests; per unexpected release builds T1 (current tour plus an
/// excursion anchored at the cheapest predicted request) and T2 (a fresh
/// approximate tour over all unserved requests) and follows the shorter.
class PolyPredictReplanPolicy : public PredictReplanBase {
 public:
  struct ExcursionRecord {
    int request = -1;      // unexpected actual request
    int anchor = -1;       // chosen predicted request
    double added = 0.0;    // completion increase of T1 over the previous plan
    double bound = 0.0;    // 3 * gamma of the singleton from the anchor
    bool took_t2 = false;  // the fresh tour won
  };

  explicit PolyPredictReplanPolicy(PredictionSet pred, double nu = 2.0, bool practical = false);
  std::string name() const override { return "poly_predict_replan"; }
  void start(Controller& c) override;
  void on_release(Controller& c, int i) override;
  void on_wake(Controller& c, int tag) override;
  void on_step_complete(Controller& c, const PlanStep& s) override;
  void on_serve(Controller& c, int i) override;

  void observe_release(Controller& c, int i) override;
  void observe_serve(Controller& c, int i) override;
  void activate(Controller& c) override;

  double ctilde() const { return ctilde_; }
  const std::vector<ExcursionRecord>& excursions() const { return excursions_; }

 private:
  void note_release(Controller& c, int i, bool active);
  void handle_unexpected(Controller& c, int i);
  void recompute(Controller& c);
  void reissue(Controller& c);
  bool known_absent(int j, double now) const;
  void arm_absence(Controller& c);
  double plan_end(Controller& c, const std::vector<PlanStep>& steps) const;

  PredictionSet pred_;
  double nu_;
  bool practical_;

  bool active_ = false;
  double ctilde_ = 0.0;
  std::vector<char> pred_dropped_;  // excluded as known absent
  std::vector<char> pred_served_;
  std::vector<int> pred_match_;
  std::vector<int> actual_match_;
  std::vector<int> unexpected_;
  std::vector<PlanStep> remaining_;
  std::vector<int> serve_;
  std::vector<ExcursionRecord> excursions_;
};

/// Half-line strategy around a predicted makespan C-hat: run Mrin until
/// alpha * C-hat, move to p3 = ((1 - alpha) * C-hat + p2) / 2 where p2 is the
/// position at the end of phase (i), then run Mrin again.
class AlgoHlPolicy : public OnlinePolicy {
 public:
  AlgoHlPolicy(double chat, double alpha);
  std::string name() const override { return "algohl"; }
  double certified_ratio() const override { return 1.5 / alpha_; }
  void start(Controller& c) override;
  void on_release(Controller& c, int i) override;
  void on_wake(Controller& c, int tag) override;
  void on_plan_complete(Controller& c) override;

 private:
  double chat_;
  double alpha_;
  MrinPolicy mrin_;
  int phase_ = 1;
};

}  // namespace covertour
