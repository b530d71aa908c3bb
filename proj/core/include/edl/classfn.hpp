#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "edl/cyclo.hpp"
#include "edl/subgroup.hpp"

namespace edl {

struct ConjClass {
  Mat rep;
  std::uint64_t size = 0;
  std::uint64_t order = 0;  // element order
};

class ClassTable;
using ClassTablePtr = std::shared_ptr<const ClassTable>;

// Conjugacy classes of an explicitly listed finite matrix group.
class ClassTable {
 public:
  // elems must be closed under multiplication. N = 0 takes the group exponent; otherwise N must be
  // a multiple of it (subgroups share the cyclotomic field of the ambient group this way).
  static ClassTablePtr build(const Group& G, std::vector<Mat> elems, unsigned N = 0,
                             std::uint64_t budget = kDefaultBudget);
  static ClassTablePtr build(const Group& G, unsigned N = 0, std::uint64_t budget = kDefaultBudget);

  const Group& group() const { return G_; }
  std::uint64_t order() const { return elems_.size(); }
  std::size_t size() const { return classes_.size(); }
  const std::vector<ConjClass>& classes() const { return classes_; }
  const ConjClass& operator[](std::size_t c) const { return classes_[c]; }
  unsigned exponent() const { return N_; }
  const CycloFieldPtr& field() const { return K_; }
  const std::vector<Mat>& elements() const { return elems_; }
  const std::vector<Mat>& generators() const { return gens_; }
  const std::vector<std::uint32_t>& members(std::size_t c) const { return members_[c]; }

  std::optional<std::size_t> element_index(const Mat& g) const;
  bool contains(const Mat& g) const { return element_index(g).has_value(); }
  std::size_t class_of(const Mat& g) const;  // throws InvalidArgument for non-members
  std::size_t class_of_index(std::size_t i) const { return class_of_elem_[i]; }
  std::size_t identity_class() const { return id_class_; }
  std::size_t power_class(std::size_t c, long long k) const;
  std::size_t inverse_class(std::size_t c) const { return power_class(c, -1); }

 private:
  ClassTable(const Group& G) : G_(G) {}
  Group G_;
  std::vector<Mat> elems_, gens_;
  std::unordered_map<MatKey, std::uint32_t, MatKeyHash> index_;
  std::vector<ConjClass> classes_;
  std::vector<std::vector<std::uint32_t>> members_;
  std::vector<std::uint32_t> class_of_elem_;
  std::size_t id_class_ = 0;
  unsigned N_ = 1;
  CycloFieldPtr K_;
};

class ClassFunction {
 public:
  ClassFunction() = default;
  ClassFunction(ClassTablePtr t, std::vector<Cyclo> values, std::string label = {});
  static ClassFunction constant(ClassTablePtr t, long long c);
  static ClassFunction trivial(ClassTablePtr t) { return constant(std::move(t), 1); }
  // Function on elements, evaluated at class representatives.
  static ClassFunction from_function(ClassTablePtr t, const std::function<Cyclo(const Mat&)>& f);

  const ClassTable& table() const { return *t_; }
  const ClassTablePtr& table_ptr() const { return t_; }
  const std::vector<Cyclo>& values() const { return v_; }
  const Cyclo& operator[](std::size_t c) const { return v_[c]; }
  Cyclo at(const Mat& g) const { return v_[t_->class_of(g)]; }
  long long degree() const { return v_[t_->identity_class()].to_integer(); }
  const std::string& label() const { return label_; }
  void set_label(std::string s) { label_ = std::move(s); }

  ClassFunction operator+(const ClassFunction& o) const;
  ClassFunction operator-(const ClassFunction& o) const;
  ClassFunction operator*(const ClassFunction& o) const;
  ClassFunction operator*(long long s) const;
  ClassFunction conj() const;
  bool operator==(const ClassFunction& o) const { return v_ == o.v_; }

 private:
  ClassTablePtr t_;
  std::vector<Cyclo> v_;
  std::string label_;
};

// (1/|G|) sum |C| a(C) conj(b(C)); throws NonIntegral when the value is not rational.
Rational inner_product(const ClassFunction& a, const ClassFunction& b);

// H's table must list a subgroup of G's group with the same cyclotomic order.
ClassFunction restrict_to(const ClassFunction& chi, const ClassTablePtr& H);
// Ind(C) = [G:H] / |C| * sum over H-classes D inside C of |D| chi(D)
ClassFunction induce(const ClassFunction& chi, const ClassTablePtr& G);
// g -> #{xH : g x H = x H}, counted over an explicit transversal.
ClassFunction permutation_character(const ClassTablePtr& G, const std::vector<Mat>& H);
// Pull back along a homomorphism onto the group of Q.
ClassFunction inflate(const ClassFunction& chi, const ClassTablePtr& G, const std::function<Mat(const Mat&)>& proj);

// Multiplicities against an orthonormal basis; throws NonIntegral for non-integral coefficients.
std::vector<long long> decompose(const ClassFunction& chi, const std::vector<ClassFunction>& basis);

// All irreducible characters, by simultaneous eigenvectors of the class multiplication matrices
// modulo a prime P = 1 mod N, values lifted through eigenvalue multiplicities.
std::vector<ClassFunction> character_table(const ClassTablePtr& t);

struct TableCheck {
  bool rows_orthonormal = false;
  bool columns_orthogonal = false;
  bool complete = false;  // as many characters as classes
  std::uint64_t sum_dim2 = 0;
};
TableCheck check_table(const std::vector<ClassFunction>& chars, int threads = 1);

}  // namespace edl
