public class JdbcDatabaseConnection implements DatabaseConnection {
    private String url;
    private String username;
    private String password;

    public JdbcDatabaseConnection(String url, String username, String password) {
        this.url = url;
        this.username = username;
        this.password = password;
    }
}
