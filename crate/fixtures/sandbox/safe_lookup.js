// outcome: certified
// check: raw
// Only primitive strings reach the computed read.
var safeLookup = function(obj, field) {
  if (field === "XMLHttpRequest") { return undefined }
  else if (typeof field === "string") { return obj[field] }
  else { return undefined } };
var evil = { toString: function() { return "XMLHttpRequest" } };
print(safeLookup(window, evil));
print(safeLookup(window, "XMLHttpRequest"));
print(safeLookup({a: 1}, "a"));
