// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The rispm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "rispm/channel.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include <fmt/core.h>
#include <fmt/ostream.h>

namespace rispm {

ChannelSet::ChannelSet(CVector generator, std::vector<CVector> users, double noise_var)
    : generator_(std::move(generator)), users_(std::move(users)), noise_var_(noise_var) {
  if (generator_.size() < 1) {
    throw std::invalid_argument("channel needs at least one RIS element");
  }
  if (users_.empty()) {
    throw std::invalid_argument("channel needs at least one user");
  }
  if (!(noise_var_ > 0.0) || !std::isfinite(noise_var_)) {
    throw std::invalid_argument(fmt::format("noise variance must be positive, got {}", noise_var_));
  }
  effective_.reserve(users_.size());
  for (std::size_t k = 0; k < users_.size(); ++k) {
    if (users_[k].size() != generator_.size()) {
      throw std::invalid_argument(fmt::format("user {} channel has {} entries, expected {}", k,
                                              users_[k].size(), generator_.size()));
    }
    effective_.push_back(users_[k].conjugate().cwiseProduct(generator_));
  }
}

ChannelSet ChannelSet::all_ones(int elements, int users, double noise_var) {
  if (elements < 1 || users < 1) {
    throw std::invalid_argument("all_ones needs elements >= 1 and users >= 1");
  }
  std::vector<CVector> u(static_cast<std::size_t>(users), CVector::Ones(elements));
  return ChannelSet(CVector::Ones(elements), std::move(u), noise_var);
}

double ChannelSet::noise_std() const { return std::sqrt(noise_var_); }

cplx ChannelSet::response(int k, const CVector& theta) const {
  // adjoint(h) * theta
  return effective(k).dot(theta);
}

ChannelSet generate_rayleigh(int elements, int users, double noise_var, std::mt19937_64& rng) {
  if (elements < 1 || users < 1) {
    throw std::invalid_argument(
        fmt::format("need elements >= 1 and users >= 1, got {} and {}", elements, users));
  }
  std::normal_distribution<double> component(0.0, std::sqrt(0.5));
  auto draw = [&](int n) {
    CVector v(n);
    for (int i = 0; i < n; ++i) {
      const double re = component(rng);
      const double im = component(rng);
      v[i] = cplx(re, im);
    }
    return v;
  };
  CVector generator = draw(elements);
  std::vector<CVector> u;
  u.reserve(static_cast<std::size_t>(users));
  for (int k = 0; k < users; ++k) {
    u.push_back(draw(elements));
  }
  return ChannelSet(std::move(generator), std::move(u), noise_var);
}

RotatedChannels rotate(const ChannelSet& channels, const SymbolVector& symbols,
                       const PskConstellation& constellation) {
  if (static_cast<int>(symbols.size()) != channels.users()) {
    throw std::invalid_argument(fmt::format("{} symbols for {} users", symbols.size(),
                                            channels.users()));
  }
  RotatedChannels out;
  out.a.reserve(symbols.size());
  for (int k = 0; k < channels.users(); ++k) {
    const cplx s_conj = std::conj(constellation.symbol(symbols[static_cast<std::size_t>(k)]));
    out.a.push_back(s_conj * channels.effective(k).conjugate());
  }
  return out;
}

void write_channel_set(std::ostream& os, const ChannelSet& channels) {
  auto write_row = [&](const CVector& row) {
    for (Eigen::Index n = 0; n < row.size(); ++n) {
      fmt::print(os, "{}{},{}", n == 0 ? "" : " ", row[n].real(), row[n].imag());
    }
    os << '\n';
  };
  write_row(channels.generator());
  for (int k = 0; k < channels.users(); ++k) {
    write_row(channels.user(k));
  }
}

ChannelSet read_channel_set(std::istream& is, double noise_var) {
  std::vector<CVector> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') {
      continue;
    }
    std::istringstream tokens(line);
    std::string token;
    std::vector<cplx> entries;
    while (tokens >> token) {
      const auto comma = token.find(',');
      if (comma == std::string::npos) {
        throw std::runtime_error(fmt::format("line {}: token '{}' is not re,im", line_no, token));
      }
      try {
        std::size_t used_re = 0;
        std::size_t used_im = 0;
        const std::string re_str = token.substr(0, comma);
        const std::string im_str = token.substr(comma + 1);
        const double re = std::stod(re_str, &used_re);
        const double im = std::stod(im_str, &used_im);
        if (used_re != re_str.size() || used_im != im_str.size()) {
          throw std::invalid_argument("trailing characters");
        }
        entries.emplace_back(re, im);
      } catch (const std::exception&) {
        throw std::runtime_error(fmt::format("line {}: cannot parse '{}'", line_no, token));
      }
    }
    CVector row(static_cast<Eigen::Index>(entries.size()));
    for (std::size_t n = 0; n < entries.size(); ++n) {
      row[static_cast<Eigen::Index>(n)] = entries[n];
    }
    rows.push_back(std::move(row));
  }
  if (rows.size() < 2) {
    throw std::runtime_error(
        fmt::format("channel file needs a generator row and at least one user row, got {} rows",
                    rows.size()));
  }
  CVector generator = std::move(rows.front());
  rows.erase(rows.begin());
  return ChannelSet(std::move(generator), std::move(rows), noise_var);
}

}  // namespace rispm
