#include "flowfwd/train.hpp"

#include <stdexcept>
#include <string>

namespace flowfwd {

Optimizer optimizer_from_name(std::string_view name) {
    if (name == "sgd") return Optimizer::Sgd;
    if (name == "adam") return Optimizer::Adam;
    throw std::invalid_argument("unknown optimizer '" + std::string(name) + "' (want sgd or adam)");
}

std::string_view optimizer_name(Optimizer opt) {
    return opt == Optimizer::Sgd ? "sgd" : "adam";
}

}  // namespace flowfwd
