/* Copyright 2026 The pcore Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PCORE_AST_HPP_
#define PCORE_AST_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace pcore {

using BigInt = boost::multiprecision::cpp_int;

struct Pos {
    int line = 0;
    int col = 0;
};

enum class Direction { In, Out, InOut };

const char *direction_name(Direction d);

struct Type;
struct Expr;
struct Stmt;
struct Decl;
using TypePtr = std::shared_ptr<const Type>;
using ExprPtr = std::shared_ptr<const Expr>;
using StmtPtr = std::shared_ptr<const Stmt>;
using DeclPtr = std::shared_ptr<const Decl>;

/// Types. One struct for every production; unused members stay empty.
enum class TypeKind {
    Bool,
    Int,
    Bit,
    Error,
    MatchKind,
    Enum,
    Record,
    Header,
    Stack,
    Var,
    Union,
    Table,
    Function,
    Constructor,
};

struct FieldType {
    std::string name;
    TypePtr type;
};

struct Param {
    Direction dir = Direction::In;
    std::string name;
    TypePtr type;
};

struct Type {
    TypeKind kind = TypeKind::Bool;
    std::optional<uint64_t> width;     // Bit, literal width
    ExprPtr widthExpr;                 // Bit, unevaluated width
    std::string name;                  // Enum, Var, Union
    std::vector<std::string> members;  // Enum; Error/MatchKind entries of Delta
    std::vector<FieldType> fields;     // Record, Header, Union
    TypePtr elem;                      // Stack
    uint64_t size = 0;                 // Stack
    std::vector<std::string> typeParams;  // Function
    std::vector<Param> params;            // Function, Constructor
    TypePtr ret;                          // Function, Constructor
};

namespace ty {
TypePtr boolean();
TypePtr integer();
TypePtr bit(uint64_t w);
TypePtr bit_expr(ExprPtr w);
TypePtr error();
TypePtr match_kind();
TypePtr enumeration(std::string name, std::vector<std::string> members);
TypePtr record(std::vector<FieldType> fields);
TypePtr header(std::vector<FieldType> fields);
TypePtr stack(TypePtr elem, uint64_t size);
TypePtr var(std::string name);
TypePtr union_(std::string name, std::vector<FieldType> alts);
TypePtr table();
TypePtr function(std::vector<std::string> typeParams, std::vector<Param> params, TypePtr ret);
TypePtr constructor(std::vector<Param> params, TypePtr ret);
TypePtr unit();  // the empty record {}
}  // namespace ty

bool is_base_type(const Type &t);
bool is_unit(const Type &t);
const FieldType *find_field(const Type &t, const std::string &name);

enum class ExprKind {
    Bool,
    Int,
    Var,
    Index,
    Slice,
    UnOp,
    BinOp,
    Cast,
    Record,
    Member,
    TypeMember,
    Call,
    Init,
};

enum class UnOp { Not, Neg, BitNot };

enum class BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    Shl,
    Shr,
    BAnd,
    BOr,
    BXor,
    Concat,
    Eq,
    Neq,
    Lt,
    Le,
    Gt,
    Ge,
    LAnd,
    LOr,
};

const char *unop_symbol(UnOp op);
const char *binop_symbol(BinOp op);
const char *unop_name(UnOp op);
const char *binop_name(BinOp op);

struct FieldExpr {
    std::string name;
    ExprPtr expr;
};

struct Expr {
    ExprKind kind = ExprKind::Bool;
    Pos pos;
    bool boolVal = false;
    BigInt intVal;
    std::optional<uint64_t> width;  // Int literal width; nullopt is the int (infinite) width
    std::string name;               // Var name, Member field, TypeMember member
    std::string typeName;           // TypeMember type name
    UnOp uop = UnOp::Not;
    BinOp bop = BinOp::Add;
    std::vector<ExprPtr> sub;       // Index(a,i) Slice(a,hi,lo) UnOp(a) BinOp(a,b) Cast(a) Member(a) Call(callee)
    std::vector<ExprPtr> args;      // Call arguments
    TypePtr type;                   // Cast target, Init type
    std::vector<TypePtr> typeArgs;  // Call type arguments
    std::vector<FieldExpr> fields;  // Record literal
};

namespace ex {
ExprPtr boolean(bool b, Pos p = {});
ExprPtr integer(BigInt v, std::optional<uint64_t> width = std::nullopt, Pos p = {});
ExprPtr var(std::string name, Pos p = {});
ExprPtr index(ExprPtr a, ExprPtr i, Pos p = {});
ExprPtr slice(ExprPtr a, ExprPtr hi, ExprPtr lo, Pos p = {});
ExprPtr unop(UnOp op, ExprPtr a, Pos p = {});
ExprPtr binop(BinOp op, ExprPtr a, ExprPtr b, Pos p = {});
ExprPtr cast(TypePtr t, ExprPtr a, Pos p = {});
ExprPtr record(std::vector<FieldExpr> fields, Pos p = {});
ExprPtr member(ExprPtr a, std::string field, Pos p = {});
ExprPtr type_member(std::string type, std::string member, Pos p = {});
ExprPtr call(ExprPtr callee, std::vector<TypePtr> typeArgs, std::vector<ExprPtr> args, Pos p = {});
ExprPtr init(TypePtr t, Pos p = {});
}  // namespace ex

enum class StmtKind { Call, Assign, If, Block, Exit, Return, Decl, Switch };

struct SwitchCase {
    std::optional<std::string> label;  // nullopt is the default case
    StmtPtr body;                      // always a Block
};

struct Stmt {
    StmtKind kind = StmtKind::Block;
    Pos pos;
    ExprPtr e1;  // Call expr, Assign lhs, If cond, Return value, Switch scrutinee
    ExprPtr e2;  // Assign rhs
    StmtPtr s1;  // If then
    StmtPtr s2;  // If else
    std::vector<StmtPtr> stmts;  // Block
    DeclPtr decl;                // Decl
    std::vector<SwitchCase> cases;
};

namespace st {
StmtPtr call(ExprPtr e, Pos p = {});
StmtPtr assign(ExprPtr lhs, ExprPtr rhs, Pos p = {});
StmtPtr if_(ExprPtr c, StmtPtr t, StmtPtr e, Pos p = {});
StmtPtr block(std::vector<StmtPtr> stmts, Pos p = {});
StmtPtr exit_(Pos p = {});
StmtPtr return_(ExprPtr e, Pos p = {});
StmtPtr decl(DeclPtr d, Pos p = {});
StmtPtr switch_(ExprPtr e, std::vector<SwitchCase> cases, Pos p = {});
}  // namespace st

enum class DeclKind {
    Const,
    VarInit,
    VarUninit,
    Inst,
    Typedef,
    Enum,
    Error,
    MatchKind,
    Union,
    Table,
    Control,
    Func,
};

struct KeyEntry {
    ExprPtr expr;
    std::string matchKind;
};

struct CtrlParam {
    std::string name;
    TypePtr type;
};

/// x(static args, control-plane params). For a default action the args are
/// the control-plane argument expressions and ctrlParams is empty.
struct ActionRef {
    std::string name;
    std::vector<ExprPtr> args;
    std::vector<CtrlParam> ctrlParams;
    Pos pos;
};

struct Decl {
    DeclKind kind = DeclKind::Const;
    Pos pos;
    std::string name;
    TypePtr type;                       // Const/Var type, Typedef type, Func return type
    ExprPtr init;                       // Const, VarInit
    std::string typeName;               // Inst
    std::vector<ExprPtr> args;          // Inst constructor arguments
    std::vector<std::string> members;   // Enum, Error, MatchKind
    std::vector<FieldType> fields;      // Union alternatives
    std::vector<KeyEntry> keys;         // Table
    std::vector<ActionRef> actions;     // Table
    std::optional<ActionRef> defaultAction;  // Table
    std::vector<Param> params;          // Control, Func
    std::vector<Param> ctorParams;      // Control
    std::vector<DeclPtr> locals;        // Control
    StmtPtr body;                       // Control apply block, Func body
    std::vector<std::string> typeParams;  // Func
};

bool is_var_decl(const Decl &d);
bool is_type_decl(const Decl &d);

struct Program {
    std::vector<DeclPtr> decls;
};

/// Structural equality, ignoring source positions.
bool equal(const Type &a, const Type &b);
bool equal(const Expr &a, const Expr &b);
bool equal(const Stmt &a, const Stmt &b);
bool equal(const Decl &a, const Decl &b);
bool equal(const Program &a, const Program &b);
bool equal(const TypePtr &a, const TypePtr &b);
bool equal(const ExprPtr &a, const ExprPtr &b);
bool equal(const StmtPtr &a, const StmtPtr &b);
bool equal(const DeclPtr &a, const DeclPtr &b);

/// True when the type has no unevaluated width and no defined type names.
bool is_normalized_shape(const Type &t);

/// Syntactic equality of normalized types, modulo renaming of bound type
/// parameters. Throws InternalError on non-normalized input.
bool type_equal(const TypePtr &a, const TypePtr &b);

std::set<std::string> free_type_vars(const TypePtr &t);

/// Capture-free substitution of type variables.
TypePtr substitute(const TypePtr &t, const std::vector<std::string> &names,
                   const std::vector<TypePtr> &with);

}  // namespace pcore

#endif  // PCORE_AST_HPP_
