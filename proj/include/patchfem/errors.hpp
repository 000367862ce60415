#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace patchfem {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DegenerateTriangle : public Error {
public:
    using Error::Error;
};

class UnsupportedDegree : public Error {
public:
    using Error::Error;
};

/// Raised when a patch is cut in a way the patch method cannot represent
/// (twice through one edge, more than two boundary points, ...). The caller
/// is expected to refine the mesh and try again.
class RefinementRequired : public Error {
public:
    RefinementRequired(std::size_t patch_id, const std::string& why)
        : Error("patch " + std::to_string(patch_id) + " requires refinement: " + why),
          patch_id_(patch_id) {}

    std::size_t patch_id() const noexcept { return patch_id_; }

private:
    std::size_t patch_id_;
};

class EmptySystem : public Error {
public:
    using Error::Error;
};

class SingularSystem : public Error {
public:
    using Error::Error;
};

class InsufficientData : public Error {
public:
    using Error::Error;
};

}  // namespace patchfem
