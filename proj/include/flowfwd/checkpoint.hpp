#pragma once

#include <optional>
#include <string>

#include "flowfwd/basis.hpp"
#include "flowfwd/classical_net.hpp"
#include "flowfwd/hilbert_net.hpp"
#include "flowfwd/train.hpp"

namespace flowfwd {

// A trained model with everything needed to evaluate it later: the
// parameters, the fixed directions, the training settings that produced it,
// and how to rebuild the input features (basis and, for the classical net,
// the sampling grid). JSON on disk; numeric values round-trip bit-exactly.
struct Checkpoint {
    enum class Kind { Hilbert, Classical };

    Kind kind = Kind::Hilbert;
    std::optional<HilbertNet> hilbert;
    std::optional<ClassicalNet> classical;
    double xi_max = 1.0;  // classical feature grid extent

    TrainConfig train;
    int basis_size = 7;
    OrthonormalBasis::Variant basis_variant = OrthonormalBasis::Variant::Standard;

    void validate() const;
};

void save_checkpoint(const Checkpoint& ck, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace flowfwd
