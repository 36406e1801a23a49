// outcome: certified
// After rewriting, the computed read goes through the wrapper.
var evil = { toString: function() { return "XMLHttpRequest" } };
print(window[evil]);
print(window["XMLHttp" + "Request"]);
