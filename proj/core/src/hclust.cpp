#include "edclust/hclust.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <limits>
#include <stdexcept>

#include <json.hpp>

namespace edclust {

namespace {

std::vector<std::string> leaf_names(int leaves, const std::vector<std::string>& names) {
  if (names.empty()) {
    std::vector<std::string> out;
    out.reserve(static_cast<std::size_t>(leaves));
    for (int i = 0; i < leaves; ++i) out.push_back("V" + std::to_string(i + 1));
    return out;
  }
  if (static_cast<int>(names.size()) != leaves) {
    throw std::invalid_argument("dendrogram serialization: name count != leaf count");
  }
  return names;
}

std::string format_height(double h) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", h);
  return buf;
}

}  // namespace

int Partition::k() const {
  if (labels.empty()) throw std::invalid_argument("partition: empty");
  std::vector<bool> seen;
  int max_label = 0;
  for (int lab : labels) max_label = std::max(max_label, lab);
  seen.assign(static_cast<std::size_t>(max_label) + 1, false);
  for (int lab : labels) {
    if (lab < 1 || lab > max_label) {
      throw std::invalid_argument("partition: labels must lie in 1..K");
    }
    seen[static_cast<std::size_t>(lab)] = true;
  }
  for (int lab = 1; lab <= max_label; ++lab) {
    if (!seen[static_cast<std::size_t>(lab)]) {
      throw std::invalid_argument("partition: label " + std::to_string(lab) + " unused");
    }
  }
  return max_label;
}

Dendrogram agglomerate(const DissimilarityMatrix& d) {
  validate_dissimilarity_matrix(d);
  const int n = static_cast<int>(d.size());
  const int total = 2 * n - 1;  // leaf ids 0..n-1, merge ids n..2n-2

  Eigen::MatrixXd work = Eigen::MatrixXd::Zero(total, total);
  work.topLeftCorner(n, n) = d.values;
  std::vector<int> size(static_cast<std::size_t>(total), 1);
  std::vector<int> active;
  active.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) active.push_back(i);

  Dendrogram dend;
  dend.leaves = n;
  dend.merges.reserve(static_cast<std::size_t>(n - 1));

  for (int step = 0; step < n - 1; ++step) {
    // Scan pairs in ascending (id, id) order; strict < keeps the first
    // minimal pair, which is the lexicographic tie-break.
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i + 1 < active.size(); ++i) {
      for (std::size_t j = i + 1; j < active.size(); ++j) {
        const double w = work(active[i], active[j]);
        if (w < best) {
          best = w;
          bi = i;
          bj = j;
        }
      }
    }
    const int a = active[bi];
    const int b = active[bj];
    const int merged = n + step;
    const double na = size[static_cast<std::size_t>(a)];
    const double nb = size[static_cast<std::size_t>(b)];
    size[static_cast<std::size_t>(merged)] = static_cast<int>(na + nb);
    dend.merges.push_back({a, b, best, static_cast<int>(na + nb)});

    for (int other : active) {
      if (other == a || other == b) continue;
      const double nl = size[static_cast<std::size_t>(other)];
      const double updated = ((na + nl) * work(a, other) + (nb + nl) * work(b, other) -
                              nl * work(a, b)) /
                             (na + nb + nl);
      work(merged, other) = updated;
      work(other, merged) = updated;
    }
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(bj));
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(bi));
    active.push_back(merged);  // ids grow monotonically, so order stays sorted
  }
  return dend;
}

Partition cut(const Dendrogram& dend, int k) {
  const int n = dend.leaves;
  if (static_cast<int>(dend.merges.size()) != n - 1) {
    throw std::invalid_argument("cut: malformed dendrogram");
  }
  if (k < 1 || k > n) throw std::invalid_argument("cut: K must lie in 1..d");

  // Apply the first n-K merges; remaining forest components are clusters.
  std::vector<int> parent(static_cast<std::size_t>(2 * n - 1));
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
  for (int step = 0; step < n - k; ++step) {
    const MergeStep& m = dend.merges[static_cast<std::size_t>(step)];
    parent[static_cast<std::size_t>(m.left)] = n + step;
    parent[static_cast<std::size_t>(m.right)] = n + step;
  }
  auto find_root = [&parent](int i) {
    while (parent[static_cast<std::size_t>(i)] != i) i = parent[static_cast<std::size_t>(i)];
    return i;
  };

  Partition part;
  part.labels.assign(static_cast<std::size_t>(n), 0);
  std::vector<int> label_of(static_cast<std::size_t>(2 * n - 1), 0);
  int next_label = 1;
  for (int i = 0; i < n; ++i) {
    const int root = find_root(i);
    if (label_of[static_cast<std::size_t>(root)] == 0) {
      label_of[static_cast<std::size_t>(root)] = next_label++;
    }
    part.labels[static_cast<std::size_t>(i)] = label_of[static_cast<std::size_t>(root)];
  }
  return part;
}

SilhouetteReport silhouette(const DissimilarityMatrix& d, const Partition& part) {
  validate_dissimilarity_matrix(d);
  const int n = static_cast<int>(d.size());
  if (part.size() != n) {
    throw std::invalid_argument("silhouette: partition size does not match matrix");
  }
  const int k = part.k();
  if (k < 2) throw std::invalid_argument("silhouette: need at least 2 clusters");

  std::vector<int> cluster_size(static_cast<std::size_t>(k) + 1, 0);
  for (int lab : part.labels) ++cluster_size[static_cast<std::size_t>(lab)];

  SilhouetteReport report;
  report.k = k;
  report.s.assign(static_cast<std::size_t>(n), 0.0);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const int own = part.labels[static_cast<std::size_t>(i)];
    if (cluster_size[static_cast<std::size_t>(own)] == 1) {
      report.s[static_cast<std::size_t>(i)] = 0.0;  // singleton convention
      continue;
    }
    std::vector<double> mean_to(static_cast<std::size_t>(k) + 1, 0.0);
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      mean_to[static_cast<std::size_t>(part.labels[static_cast<std::size_t>(j)])] +=
          d.values(i, j);
    }
    double a = 0.0;
    double b = std::numeric_limits<double>::infinity();
    for (int lab = 1; lab <= k; ++lab) {
      const int count = cluster_size[static_cast<std::size_t>(lab)];
      if (lab == own) {
        a = mean_to[static_cast<std::size_t>(lab)] / (count - 1);
      } else {
        b = std::min(b, mean_to[static_cast<std::size_t>(lab)] / count);
      }
    }
    const double denom = std::max(a, b);
    const double s = denom > 0.0 ? (b - a) / denom : 0.0;
    report.s[static_cast<std::size_t>(i)] = s;
    total += s;
  }
  for (double s : report.s) {
    if (!(s >= -1.0 && s <= 1.0)) throw std::logic_error("silhouette: value outside [-1, 1]");
  }
  report.average = total / n;
  return report;
}

KSelection select_k(const Dendrogram& dend, const DissimilarityMatrix& d, int k_max) {
  const int n = dend.leaves;
  if (k_max < 2 || k_max > n - 1) {
    throw std::invalid_argument("select_k: need 2 <= k_max <= d-1");
  }
  KSelection sel;
  sel.reports.reserve(static_cast<std::size_t>(k_max - 1));
  double best = -std::numeric_limits<double>::infinity();
  for (int k = 2; k <= k_max; ++k) {
    SilhouetteReport rep = silhouette(d, cut(dend, k));
    if (rep.average > best) {
      best = rep.average;
      sel.best_k = k;
    }
    sel.reports.push_back(std::move(rep));
  }
  return sel;
}

std::string dendrogram_to_json(const Dendrogram& dend, const std::vector<std::string>& names) {
  const std::vector<std::string> labels = leaf_names(dend.leaves, names);
  nlohmann::ordered_json doc;
  doc["leaves"] = labels;
  doc["merges"] = nlohmann::ordered_json::array();
  for (const MergeStep& m : dend.merges) {
    doc["merges"].push_back({{"left", m.left}, {"right", m.right}, {"height", m.height},
                             {"size", m.size}});
  }
  return doc.dump(2) + "\n";
}

std::string dendrogram_to_newick(const Dendrogram& dend, const std::vector<std::string>& names) {
  const std::vector<std::string> labels = leaf_names(dend.leaves, names);
  const int n = dend.leaves;
  if (static_cast<int>(dend.merges.size()) != n - 1) {
    throw std::invalid_argument("newick: malformed dendrogram");
  }
  auto height_of = [&](int id) {
    return id < n ? 0.0 : dend.merges[static_cast<std::size_t>(id - n)].height;
  };
  // Newick metacharacters in labels are replaced rather than quoted.
  auto sanitize = [](std::string s) {
    for (char& c : s) {
      if (c == '(' || c == ')' || c == ',' || c == ':' || c == ';' || c == ' ' || c == '\'') {
        c = '_';
      }
    }
    return s;
  };
  std::function<std::string(int, double)> render = [&](int id, double parent_height) {
    const double branch = parent_height - height_of(id);
    std::string body;
    if (id < n) {
      body = sanitize(labels[static_cast<std::size_t>(id)]);
    } else {
      const MergeStep& m = dend.merges[static_cast<std::size_t>(id - n)];
      body = "(" + render(m.left, m.height) + "," + render(m.right, m.height) + ")";
    }
    return body + ":" + format_height(branch);
  };
  const int root = 2 * n - 2;
  std::string body;
  const MergeStep& m = dend.merges[static_cast<std::size_t>(root - n)];
  body = "(" + render(m.left, m.height) + "," + render(m.right, m.height) + ")";
  return body + ";\n";
}

}  // namespace edclust
